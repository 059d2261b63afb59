//! The jet metric on `O(-1)` of the Green-Griffiths tower and its polar coordinates.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::schedule::EpsilonSchedule;
use crate::error::{dimension, Result};
use crate::jet_algebra::JetPoint;
use crate::scalar::{norm_sqr, pow, ComplexRational};

fn check_order<T>(jet: &JetPoint<T>, sched: &EpsilonSchedule) -> Result<()>
where
    T: crate::Scalar,
{
    if jet.order() != sched.k() {
        return dimension(format!("jet of order {} with a schedule of length {}", jet.order(), sched.k()));
    }
    Ok(())
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// `||xi||^2 = e^phi (sum_s eps_s |xi_s|^{2p/s})^{1/p}`.
pub fn taut_norm(jet: &JetPoint<Complex64>, sched: &EpsilonSchedule, phi: f64) -> Result<f64> {
    check_order(jet, sched)?;
    let p = sched.p() as f64;
    let sum: f64 = jet
        .xis()
        .iter()
        .zip(sched.eps_f64())
        .enumerate()
        .map(|(i, (xi, e))| e * norm2(xi).powf(p / (i as f64 + 1.0)))
        .sum();
    Ok(phi.exp() * sum.powf(1.0 / p))
}

/// `(||xi||^2)^p` at `phi = 0`, exactly: `sum_s eps_s (|xi_s|^2)^{p/s}`
/// with integer exponents `p/s`.
pub fn taut_norm_pow_exact(jet: &JetPoint<ComplexRational>, sched: &EpsilonSchedule) -> Result<BigRational> {
    check_order(jet, sched)?;
    let p = sched.p();
    Ok(jet
        .xis()
        .iter()
        .zip(sched.eps())
        .enumerate()
        .map(|(i, (xi, e))| {
            let n2: BigRational = xi.iter().map(norm_sqr).fold(BigRational::zero(), |a, b| a + b);
            e * pow(&n2, (p / (i as u64 + 1)) as u32)
        })
        .fold(BigRational::zero(), |a, b| a + b))
}

/// Radii `x_s` and unit directions `u_s` of a jet.
///
/// `degenerate[s]` marks `xi_s = 0`, where `u_s` is the fixed vector `e_1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberSample {
    pub xs: Vec<f64>,
    pub us: Vec<Vec<Complex64>>,
    pub degenerate: Vec<bool>,
}

impl FiberSample {
    pub fn k(&self) -> usize {
        self.xs.len()
    }

    pub fn r(&self) -> usize {
        self.us.first().map_or(0, Vec::len)
    }
}

fn direction(xi: &[Complex64]) -> (f64, Vec<Complex64>, bool) {
    let norm = norm2(xi).sqrt();
    if norm == 0.0 {
        let mut e1 = vec![Complex64::zero(); xi.len()];
        e1[0] = Complex64::new(1.0, 0.0);
        return (0.0, e1, true);
    }
    (norm, xi.iter().map(|z| z / norm).collect(), false)
}

/// `xi_s = eps_s^{-1/2p} x_s^{1/p} u_s`, i.e. `x_s = eps_s^{1/2} |xi_s|^p`
/// and `u_s = xi_s / |xi_s|`.
pub fn polar_decompose(jet: &JetPoint<Complex64>, sched: &EpsilonSchedule) -> Result<FiberSample> {
    check_order(jet, sched)?;
    let p = sched.p() as i32;
    let mut out = FiberSample { xs: vec![], us: vec![], degenerate: vec![] };
    for (xi, e) in jet.xis().iter().zip(sched.eps_f64()) {
        let (norm, u, deg) = direction(xi);
        out.xs.push(e.sqrt() * norm.powi(p));
        out.us.push(u);
        out.degenerate.push(deg);
    }
    Ok(out)
}

/// Inverse of [`polar_decompose`].
pub fn polar_reconstruct(sample: &FiberSample, sched: &EpsilonSchedule) -> Result<Vec<Vec<Complex64>>> {
    if sample.k() != sched.k() {
        return dimension("sample and schedule disagree on k");
    }
    let p = sched.p() as f64;
    Ok(sample
        .xs
        .iter()
        .zip(&sample.us)
        .zip(sched.eps_f64())
        .map(|((x, u), e)| {
            let radius = e.powf(-0.5 / p) * x.powf(1.0 / p);
            u.iter().map(|c| c * radius).collect()
        })
        .collect())
}

/// Point of the unit slice `||xi|| = 1` over a jet, in the coordinates
/// the curvature formula is linear in:
/// `x_s = eps_s |xi_s|^{2p/s} / sum_t eps_t |xi_t|^{2p/t}` (so `sum_s x_s = 1`),
/// with `u_s = xi_s / |xi_s|`.
pub fn slice_coordinates(jet: &JetPoint<Complex64>, sched: &EpsilonSchedule) -> Result<FiberSample> {
    check_order(jet, sched)?;
    let p = sched.p() as f64;
    let mut out = FiberSample { xs: vec![], us: vec![], degenerate: vec![] };
    for (i, (xi, e)) in jet.xis().iter().zip(sched.eps_f64()).enumerate() {
        let (norm, u, deg) = direction(xi);
        // log-domain: exponents 2p/s reach 120 for k = 5
        out.xs.push(if deg { f64::NEG_INFINITY } else { e.ln() + (2.0 * p / (i as f64 + 1.0)) * norm.ln() });
        out.us.push(u);
        out.degenerate.push(deg);
    }
    let top = out.xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return dimension("the zero jet has no point on the unit slice");
    }
    let total: f64 = out.xs.iter().map(|l| (l - top).exp()).sum();
    for x in out.xs.iter_mut() {
        *x = (*x - top).exp() / total;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet_algebra::scale_jet;
    use crate::scalar::{crational, int, rational};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn first_order_norm_is_euclidean() {
        let s = EpsilonSchedule::geometric(1).unwrap();
        let j = JetPoint::new(vec![c(0.0, 0.0)], vec![vec![c(3.0, 0.0), c(0.0, 4.0)]]).unwrap();
        assert!((taut_norm(&j, &s, 0.0).unwrap() - 25.0).abs() < 1e-12);
        assert!((taut_norm(&j, &s, 0.5).unwrap() - 25.0 * 0.5f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn second_order_norm() {
        let s = EpsilonSchedule::new(vec![int(1), rational(1, 4)]).unwrap();
        let j = JetPoint::new(vec![c(0.0, 0.0)], vec![vec![c(1.0, 1.0)], vec![c(0.0, 3.0)]]).unwrap();
        // (|xi1|^4 + eps2 |xi2|^2)^{1/2} = (4 + 9/4)^{1/2}
        assert!((taut_norm(&j, &s, 0.0).unwrap() - 6.25f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exact_descent() {
        let s = EpsilonSchedule::geometric(3).unwrap();
        let q = |a, b| crational(rational(a, b), int(0));
        let j = JetPoint::new(
            vec![q(0, 1)],
            vec![vec![crational(int(1), rational(1, 2)), q(2, 1)], vec![q(-1, 3), crational(int(0), int(1))], vec![q(5, 1), q(1, 7)]],
        )
        .unwrap();
        let lambda = crational(rational(2, 3), rational(-1, 5));
        let lhs = taut_norm_pow_exact(&scale_jet(&lambda, &j).unwrap(), &s).unwrap();
        let rhs = taut_norm_pow_exact(&j, &s).unwrap() * pow(&norm_sqr(&lambda), s.p() as u32);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn polar_examples() {
        let s = EpsilonSchedule::geometric(1).unwrap();
        let j = JetPoint::new(vec![c(0.0, 0.0)], vec![vec![c(3.0, 0.0), c(4.0, 0.0)]]).unwrap();
        let f = polar_decompose(&j, &s).unwrap();
        assert!((f.xs[0] - 5.0).abs() < 1e-12);
        assert!((f.us[0][0] - c(0.6, 0.0)).norm() < 1e-12 && (f.us[0][1] - c(0.8, 0.0)).norm() < 1e-12);
        let z = JetPoint::new(vec![c(0.0, 0.0)], vec![vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let f = polar_decompose(&z, &s).unwrap();
        assert_eq!(f.xs[0], 0.0);
        assert!(f.degenerate[0]);
    }

    #[test]
    fn slice_coordinates_sum_to_one() {
        let s = EpsilonSchedule::geometric(4).unwrap();
        let j = JetPoint::new(
            vec![c(0.0, 0.0)],
            vec![vec![c(0.3, 0.1)], vec![c(1.0, -2.0)], vec![c(0.0, 0.0)], vec![c(7.0, 1.0)]],
        )
        .unwrap();
        let f = slice_coordinates(&j, &s).unwrap();
        assert!((f.xs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(f.xs[2], 0.0);
        // invariant under the C^* action
        let g = slice_coordinates(&scale_jet(&c(0.5, 1.5), &j).unwrap(), &s).unwrap();
        for (a, b) in f.xs.iter().zip(&g.xs) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
