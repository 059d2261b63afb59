use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::hermitian::HermitianForm;
use super::manifold::{GridPoint, ModelKind, ModelManifold};
use crate::error::{Error, Result};
use crate::scalar::{parse_rational, to_f64};

pub type Sampler = Arc<dyn Fn(&GridPoint) -> HermitianForm + Send + Sync>;

/// A smooth real (1,1)-form on a model manifold, sampled pointwise.
#[derive(Clone)]
pub struct CurvatureField {
    model: ModelManifold,
    description: String,
    sampler: Sampler,
    class: Option<Vec<BigRational>>,
}

impl fmt::Debug for CurvatureField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureField")
            .field("model", &self.model)
            .field("description", &self.description)
            .field("class", &self.class)
            .finish()
    }
}

impl CurvatureField {
    /// A field from an arbitrary sampler. Its cohomology class is unknown.
    pub fn from_sampler(model: ModelManifold, description: impl Into<String>, sampler: Sampler) -> Self {
        CurvatureField { model, description: description.into(), sampler, class: None }
    }

    /// Parses a linear combination of the built-in forms, e.g. `"2*w1 - 3/2*w2"`.
    ///
    /// Atoms, on `P1` and on each factor `i` of `P1xP1`:
    /// - `w`, `wi`: the unit Fubini-Study form;
    /// - `h`, `hi`: `z * w` with `z` the height, a form of integral 0;
    /// - `p`, `pi`: `(3z^2 - 1)/2 * w`, also of integral 0.
    ///
    /// On `P2` only `w` is available.
    pub fn parse(model: ModelManifold, description: &str) -> Result<Self> {
        let terms = parse_terms(description)?;
        let factors = match model.kind() {
            ModelKind::P1 => 1,
            _ => 2,
        };
        // per factor: coefficients of w, h, p
        let mut coef = vec![[BigRational::zero(), BigRational::zero(), BigRational::zero()]; factors];
        for (c, atom) in terms {
            let (which, slot) = resolve_atom(model.kind(), &atom)?;
            coef[slot][which] += c;
        }
        let class: Vec<BigRational> = coef.iter().map(|c| c[0].clone()).collect();
        let num: Vec<[f64; 3]> = coef.iter().map(|c| [to_f64(&c[0]), to_f64(&c[1]), to_f64(&c[2])]).collect();
        let kind = model.kind();
        let sampler: Sampler = Arc::new(move |pt: &GridPoint| {
            let value = |i: usize| {
                let z = pt.height(i);
                let [w, h, p] = num[i];
                w + h * z + p * 0.5 * (3.0 * z * z - 1.0)
            };
            match kind {
                ModelKind::P1 => HermitianForm::diagonal(&[value(0)]),
                ModelKind::P1xP1 => HermitianForm::diagonal(&[value(0), value(1)]),
                ModelKind::P2 => HermitianForm::diagonal(&[value(0), value(0)]),
            }
        });
        Ok(CurvatureField { model, description: description.to_string(), sampler, class: Some(class) })
    }

    pub fn model(&self) -> &ModelManifold {
        &self.model
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn at(&self, point: &GridPoint) -> HermitianForm {
        (self.sampler)(point)
    }

    pub fn sampler(&self) -> &Sampler {
        &self.sampler
    }

    /// Coefficients of the cohomology class in the basis of line classes
    /// (`[d]` on `P1`/`P2`, `[a, b]` on `P1xP1`), when known.
    pub fn class(&self) -> Option<&[BigRational]> {
        self.class.as_deref()
    }

    /// Same form sampled on another grid of the same model.
    pub fn with_model(&self, model: ModelManifold) -> Result<Self> {
        if model.kind() != self.model.kind() {
            return Err(Error::Domain(format!("cannot move a field from {} to {}", self.model.kind(), model.kind())));
        }
        Ok(CurvatureField { model, ..self.clone() })
    }

    /// `a * self + b * other`, pointwise.
    pub fn combine(&self, a: f64, other: &CurvatureField, b: f64) -> Result<Self> {
        if other.model.kind() != self.model.kind() {
            return Err(Error::Domain("fields on different models".into()));
        }
        let (s1, s2) = (self.sampler.clone(), other.sampler.clone());
        Ok(CurvatureField {
            model: self.model,
            description: format!("{}*({}) + {}*({})", a, self.description, b, other.description),
            sampler: Arc::new(move |p| s1(p).scale(a).add(&s2(p).scale(b))),
            class: None,
        })
    }
}

fn resolve_atom(kind: ModelKind, atom: &str) -> Result<(usize, usize)> {
    let unknown = || Error::Parse(format!("unknown form {:?} on {}", atom, kind));
    let (head, idx) = atom.split_at(1);
    let which = match head {
        "w" => 0,
        "h" => 1,
        "p" => 2,
        _ => return Err(unknown()),
    };
    let slot = match (kind, idx) {
        (ModelKind::P1, "" | "1") | (ModelKind::P1xP1, "1") | (ModelKind::P2, "" | "1") => 0,
        (ModelKind::P1xP1, "2") => 1,
        _ => return Err(unknown()),
    };
    if kind == ModelKind::P2 && which != 0 {
        return Err(unknown());
    }
    Ok((which, slot))
}

fn parse_terms(s: &str) -> Result<Vec<(BigRational, String)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty field description".into()));
    }
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if terms.is_empty() => (1, rest),
            _ => return Err(Error::Parse(format!("expected '+' or '-' before {:?}", rest))),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        rest = tail;
        let (coef, atom) = match term.split_once('*') {
            Some((c, a)) => (parse_rational(c)?, a),
            None => (BigRational::from_integer(1.into()), term),
        };
        if atom.is_empty() || !atom.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(Error::Parse(format!("malformed term {:?}", term)));
        }
        terms.push((if sign < 0 { -coef } else { coef }, atom.to_string()));
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::manifold::GridSpec;
    use crate::scalar::{int, rational};

    fn model(kind: ModelKind) -> ModelManifold {
        ModelManifold::new(kind, GridSpec::new(4, 1)).unwrap()
    }

    #[test]
    fn parse_product_field() {
        let f = CurvatureField::parse(model(ModelKind::P1xP1), "2*w1 - 3/2*w2 + w1").unwrap();
        assert_eq!(f.class().unwrap(), &[int(3), rational(-3, 2)]);
        let cell = model(ModelKind::P1xP1).cells()[0];
        let u = f.at(&cell.point);
        assert_eq!(u.eigenvalues(), vec![-1.5, 3.0]);
    }

    #[test]
    fn height_term_has_no_class() {
        let f = CurvatureField::parse(model(ModelKind::P1), "3*w + 5*h").unwrap();
        assert_eq!(f.class().unwrap(), &[int(3)]);
        let pt = GridPoint { kind: ModelKind::P1, coords: [0.5, 0.0, 0.0, 0.0] };
        assert_eq!(f.at(&pt).eigenvalues(), vec![5.5]);
    }

    #[test]
    fn parse_errors() {
        let m = model(ModelKind::P1xP1);
        assert!(CurvatureField::parse(m, "2*w3").is_err());
        assert!(CurvatureField::parse(m, "").is_err());
        assert!(CurvatureField::parse(m, "1/0*w1").is_err());
        assert!(CurvatureField::parse(m, "2*w1 3*w2").is_err());
        assert!(CurvatureField::parse(model(ModelKind::P2), "h").is_err());
    }
}
