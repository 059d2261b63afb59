//! Weighted-homogeneous polynomials on jets, read as algebraic differential operators.

use std::collections::BTreeMap;

use super::jets::JetPoint;
use super::poly::Poly;
use super::profiles::ExponentProfile;
use crate::error::{dimension, domain, Result};
use crate::scalar::{pow, Scalar};

/// `P(x; xi) = sum_alpha a_alpha(x) xi_1^alpha_1 ... xi_k^alpha_k`, all
/// profiles of one weighted degree `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetOperator<T> {
    k: usize,
    r: usize,
    degree: u64,
    terms: BTreeMap<ExponentProfile, Poly<T>>,
}

impl<T: Scalar> JetOperator<T> {
    pub fn new(terms: BTreeMap<ExponentProfile, Poly<T>>) -> Result<Self> {
        let (k, r, degree) = check_profiles(&terms)?;
        Ok(JetOperator { k, r, degree, terms })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<ExponentProfile, Poly<T>> {
        &self.terms
    }

    pub fn eval(&self, jet: &JetPoint<T>) -> Result<T> {
        eval_operator(&self.terms, jet)
    }

    /// Product of operators; degrees add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.k != other.k || self.r != other.r {
            return domain("operators on different jet spaces");
        }
        let mut terms: BTreeMap<ExponentProfile, Poly<T>> = BTreeMap::new();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let prof = pa.combine(pb)?;
                let c = ca.mul(cb);
                let entry = terms.remove(&prof).map(|old| old.add(&c)).unwrap_or(c);
                if !entry.is_zero() {
                    terms.insert(prof, entry);
                }
            }
        }
        Ok(JetOperator { k: self.k, r: self.r, degree: self.degree + other.degree, terms })
    }
}

fn check_profiles<T>(terms: &BTreeMap<ExponentProfile, Poly<T>>) -> Result<(usize, usize, u64)> {
    let Some(first) = terms.keys().next() else {
        return domain("an operator needs at least one term");
    };
    let (k, r, m) = (first.k(), first.r(), first.weighted_degree());
    for p in terms.keys() {
        if p.k() != k || p.r() != r {
            return domain("profiles of one operator must share (k, r)");
        }
        if p.weighted_degree() != m {
            return domain(format!("mixed weighted degrees {} and {}", m, p.weighted_degree()));
        }
    }
    Ok((k, r, m))
}

/// Evaluates `sum a_alpha(x) xi^alpha` at a jet. Coefficients are
/// polynomials in the base coordinates.
pub fn eval_operator<T: Scalar>(coeffs: &BTreeMap<ExponentProfile, Poly<T>>, jet: &JetPoint<T>) -> Result<T> {
    let (k, r, _) = check_profiles(coeffs)?;
    if k > jet.order() || r != jet.rank() {
        return dimension(format!("operator on (k={}, r={}) applied to a jet with k={}, r={}", k, r, jet.order(), jet.rank()));
    }
    let mut acc = T::zero();
    for (prof, a) in coeffs {
        if a.nvars() != jet.base().len() {
            return dimension("coefficient functions must use the base coordinates");
        }
        let mut t = a.eval(jet.base());
        for (s, alpha) in prof.alphas().iter().enumerate() {
            for (x, &e) in jet.xis()[s].iter().zip(alpha) {
                t = t * pow(x, e);
            }
        }
        acc = acc + t;
    }
    Ok(acc)
}
