//! Curvature data on the base and the horizontal curvature of `O(1)` on the tower.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::metric::FiberSample;
use crate::error::{dimension, Error, Result};
use crate::morse::{CurvatureField, GridPoint, HermitianForm, ModelManifold, Sampler};

const SYMMETRY_TOL: f64 = 1e-12;

pub type TensorSampler = Arc<dyn Fn(&GridPoint) -> Vec<Complex64> + Send + Sync>;

/// Curvature tensor `c_{ij alpha beta}(z)` of a rank `r` bundle `V` over an
/// `n`-dimensional base, in an orthonormal frame.
///
/// Entries are stored at `((i * n + j) * r + alpha) * r + beta` and are
/// coefficients relative to the model's reference form, with the same
/// normalization as [`HermitianForm`]: `Theta_V = (i/2pi) sum c dz_i ^ dzbar_j (x) e_alpha^* (x) e_beta`.
#[derive(Clone)]
pub struct VBundleCurvature {
    n: usize,
    r: usize,
    description: String,
    sampler: TensorSampler,
}

impl fmt::Debug for VBundleCurvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VBundleCurvature").field("n", &self.n).field("r", &self.r).field("description", &self.description).finish()
    }
}

fn check_tensor(n: usize, r: usize, c: &[Complex64]) -> Result<()> {
    if c.len() != n * n * r * r {
        return dimension(format!("curvature tensor needs {} entries, got {}", n * n * r * r, c.len()));
    }
    let scale = c.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let idx = |i: usize, j: usize, a: usize, b: usize| ((i * n + j) * r + a) * r + b;
    for i in 0..n {
        for j in 0..n {
            for a in 0..r {
                for b in 0..r {
                    if (c[idx(i, j, a, b)] - c[idx(j, i, b, a)].conj()).norm() > SYMMETRY_TOL * scale {
                        return Err(Error::Domain(format!("curvature tensor is not hermitian at ({i},{j},{a},{b})")));
                    }
                }
            }
        }
    }
    Ok(())
}

impl VBundleCurvature {
    /// A tensor field from a sampler. Symmetry is not checked here; see
    /// [`Self::validate_on`].
    pub fn from_sampler(n: usize, r: usize, description: impl Into<String>, sampler: TensorSampler) -> Self {
        VBundleCurvature { n, r, description: description.into(), sampler }
    }

    pub fn zero(n: usize, r: usize) -> Self {
        Self::from_sampler(n, r, "0", Arc::new(move |_| vec![Complex64::new(0.0, 0.0); n * n * r * r]))
    }

    pub fn constant(n: usize, r: usize, c: Vec<Complex64>) -> Result<Self> {
        check_tensor(n, r, &c)?;
        Ok(Self::from_sampler(n, r, "constant", Arc::new(move |_| c.clone())))
    }

    /// `c_{ij alpha beta} = delta_{alpha beta} (f_alpha)_{ij}`: a direct sum of
    /// hermitian line bundles with curvature forms `f_alpha`.
    pub fn diagonal(fields: Vec<CurvatureField>) -> Result<Self> {
        let Some(first) = fields.first() else {
            return dimension("need at least one summand");
        };
        let n = first.model().dim();
        if fields.iter().any(|f| f.model().kind() != first.model().kind()) {
            return Err(Error::Domain("summands live on different models".into()));
        }
        let r = fields.len();
        let description = fields.iter().map(|f| format!("({})", f.description())).collect::<Vec<_>>().join(" + ");
        let samplers: Vec<Sampler> = fields.iter().map(|f| f.sampler().clone()).collect();
        Ok(Self::from_sampler(
            n,
            r,
            description,
            Arc::new(move |pt| {
                let mut c = vec![Complex64::new(0.0, 0.0); n * n * r * r];
                for (a, s) in samplers.iter().enumerate() {
                    let f = s(pt);
                    for i in 0..n {
                        for j in 0..n {
                            c[((i * n + j) * r + a) * r + a] = f.get(i, j);
                        }
                    }
                }
                c
            }),
        ))
    }

    /// `V = L^{(+) r}` for a single line bundle curvature `f`.
    pub fn scalar(field: CurvatureField, r: usize) -> Result<Self> {
        Self::diagonal(vec![field; r])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn at(&self, z: &GridPoint) -> Vec<Complex64> {
        (self.sampler)(z)
    }

    pub fn validate_on(&self, model: &ModelManifold) -> Result<()> {
        if model.dim() != self.n {
            return dimension(format!("bundle over a {}-dimensional base used on {}", self.n, model.kind()));
        }
        model.cells().iter().try_for_each(|cell| check_tensor(self.n, self.r, &self.at(&cell.point)))
    }

    /// `sum_{alpha beta} c_{ij alpha beta} u_alpha conj(u_beta)`.
    pub fn quadratic(&self, c: &[Complex64], u: &[Complex64]) -> HermitianForm {
        let (n, r) = (self.n, self.r);
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..r {
                    for b in 0..r {
                        acc += c[((i * n + j) * r + a) * r + b] * u[a] * u[b].conj();
                    }
                }
                m[i * n + j] = acc;
            }
        }
        hermitian(n, m)
    }

    /// `Tr_End(V) Theta_V` as an `n x n` form.
    pub fn trace(&self, c: &[Complex64]) -> HermitianForm {
        let (n, r) = (self.n, self.r);
        let m = (0..n * n).map(|ij| (0..r).map(|a| c[(ij * r + a) * r + a]).sum()).collect();
        hermitian(n, m)
    }
}

fn hermitian(n: usize, m: Vec<Complex64>) -> HermitianForm {
    HermitianForm::new(n, m).expect("hermitian by construction")
}

/// Horizontal block of the curvature of `O(1)` at `(z, xi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TautCurvature {
    pub horizontal: HermitianForm,
    /// The weighted Fubini-Study part along the fibers is positive; it is
    /// recorded rather than computed.
    pub vertical_positive: bool,
}

/// `-sum_s x_s/s sum c_{ij alpha beta}(z) u_{s alpha} conj(u_{s beta})`,
/// dropping the `O(eps)` remainder.
pub fn taut_curvature(z: &GridPoint, sample: &FiberSample, vb: &VBundleCurvature) -> Result<TautCurvature> {
    if sample.r() != vb.r() {
        return dimension(format!("fiber sample of rank {} for a bundle of rank {}", sample.r(), vb.r()));
    }
    let c = vb.at(z);
    Ok(TautCurvature { horizontal: horizontal_from_tensor(vb, &c, sample, false), vertical_positive: true })
}

/// With `trace_model`, each `<c u_s, u_s>` is replaced by its sphere average `Tr c / r`.
pub(crate) fn horizontal_from_tensor(vb: &VBundleCurvature, c: &[Complex64], sample: &FiberSample, trace_model: bool) -> HermitianForm {
    let n = vb.n();
    let mut acc = HermitianForm::zero(n);
    if trace_model {
        let w: f64 = sample.xs.iter().enumerate().map(|(s, x)| x / (s + 1) as f64).sum();
        return vb.trace(c).scale(-w / vb.r() as f64);
    }
    for (s, (x, u)) in sample.xs.iter().zip(&sample.us).enumerate() {
        if *x == 0.0 {
            continue;
        }
        acc = acc.add(&vb.quadratic(c, u).scale(-x / (s + 1) as f64));
    }
    acc
}

/// `eta = -Tr Theta_V + Theta_F` and `eta^* = Tr Theta_V + Theta_F`.
#[derive(Clone, Debug)]
pub struct EtaForms {
    pub eta: CurvatureField,
    pub eta_star: CurvatureField,
}

impl EtaForms {
    pub fn new(vb: &VBundleCurvature, theta_f: &CurvatureField) -> Result<Self> {
        let model = *theta_f.model();
        if model.dim() != vb.n() {
            return dimension("bundle and twisting line bundle live on different bases");
        }
        let build = |sign: f64, name: &str| {
            let (vb, f) = (vb.clone(), theta_f.sampler().clone());
            CurvatureField::from_sampler(
                model,
                format!("{name}[{}; {}]", vb.description(), theta_f.description()),
                Arc::new(move |pt: &GridPoint| vb.trace(&vb.at(pt)).scale(sign).add(&f(pt))),
            )
        };
        Ok(EtaForms { eta: build(-1.0, "eta"), eta_star: build(1.0, "eta*") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::{GridSpec, ModelKind};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(xs: Vec<f64>, us: Vec<Vec<Complex64>>) -> FiberSample {
        let degenerate = vec![false; xs.len()];
        FiberSample { xs, us, degenerate }
    }

    fn p1() -> ModelManifold {
        ModelManifold::new(ModelKind::P1, GridSpec::new(8, 1)).unwrap()
    }

    #[test]
    fn zero_bundle_gives_zero_form() {
        let vb = VBundleCurvature::zero(2, 3);
        let s = sample(vec![0.5, 0.5], vec![vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]; 2]);
        let pt = GridPoint { kind: ModelKind::P1xP1, coords: [0.0; 4] };
        let t = taut_curvature(&pt, &s, &vb).unwrap();
        assert_eq!(t.horizontal, HermitianForm::zero(2));
        assert!(t.vertical_positive);
    }

    #[test]
    fn negative_bundle_curvature_gives_positive_form() {
        let vb = VBundleCurvature::constant(1, 1, vec![c(-1.0, 0.0)]).unwrap();
        let s = sample(vec![1.0], vec![vec![c(0.0, 1.0)]]);
        let pt = p1().cells()[0].point;
        let t = taut_curvature(&pt, &s, &vb).unwrap();
        assert!((t.horizontal.get(0, 0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_in_x() {
        let vb = VBundleCurvature::constant(1, 2, vec![c(2.0, 0.0), c(0.5, 1.0), c(0.5, -1.0), c(-1.0, 0.0)]).unwrap();
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let us = vec![vec![c(s2, 0.0), c(0.0, s2)], vec![c(0.6, 0.0), c(0.0, -0.8)]];
        let pt = p1().cells()[0].point;
        let a = taut_curvature(&pt, &sample(vec![0.3, 0.7], us.clone()), &vb).unwrap().horizontal;
        let b = taut_curvature(&pt, &sample(vec![0.6, 1.4], us), &vb).unwrap().horizontal;
        assert!((b.get(0, 0).re - 2.0 * a.get(0, 0).re).abs() < 1e-14);
    }

    #[test]
    fn tensor_symmetry_is_checked() {
        assert!(VBundleCurvature::constant(1, 2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0)]).is_err());
        assert!(VBundleCurvature::constant(1, 2, vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn eta_forms_sum_to_twice_theta_f() {
        let m = p1();
        let vb = VBundleCurvature::diagonal(vec![
            CurvatureField::parse(m, "-w + h").unwrap(),
            CurvatureField::parse(m, "-2*w").unwrap(),
        ])
        .unwrap();
        let f = CurvatureField::parse(m, "3*w - p").unwrap();
        let e = EtaForms::new(&vb, &f).unwrap();
        for cell in m.cells() {
            let lhs = e.eta.at(&cell.point).add(&e.eta_star.at(&cell.point));
            let rhs = f.at(&cell.point).scale(2.0);
            assert!((lhs.get(0, 0) - rhs.get(0, 0)).norm() < 1e-12);
        }
        // eta = 3w + (w - h) + 2w - p
        let pt = m.cells()[3].point;
        let z = pt.height(0);
        let expect = 6.0 - z - 0.5 * (3.0 * z * z - 1.0);
        assert!((e.eta.at(&pt).get(0, 0).re - expect).abs() < 1e-12);
    }
}
