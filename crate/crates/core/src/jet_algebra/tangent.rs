//! Curves tangent to a distribution `V` given by linear equations.

use super::poly::{Poly, Series};
use crate::error::{dimension, domain, Result};
use crate::scalar::Scalar;

/// `a_{jk}(z)`, `r < j <= n`, `1 <= k <= r`: `V_z` is cut out by
/// `v_j = sum_k a_{jk}(z) v_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMatrix<T> {
    n: usize,
    r: usize,
    a: Vec<Poly<T>>,
}

impl<T: Scalar> TangentMatrix<T> {
    /// `a(j, k)` with 0-based `j < n - r`, `k < r`.
    pub fn from_fn(n: usize, r: usize, mut a: impl FnMut(usize, usize) -> Poly<T>) -> Result<Self> {
        if r == 0 || r > n {
            return dimension(format!("rank {} distribution in C^{}", r, n));
        }
        let mut entries = Vec::with_capacity((n - r) * r);
        for j in 0..n - r {
            for k in 0..r {
                let p = a(j, k);
                if p.nvars() != n {
                    return dimension("a_jk are functions of the n coordinates");
                }
                entries.push(p);
            }
        }
        Ok(TangentMatrix { n, r, a: entries })
    }

    pub fn zero(n: usize, r: usize) -> Result<Self> {
        Self::from_fn(n, r, |_, _| Poly::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn entry(&self, j: usize, k: usize) -> &Poly<T> {
        &self.a[j * self.r + k]
    }
}

/// Formal solution of `f_j' = sum_k a_jk(f) f_k'` (`j > r`) given the
/// leading components `f_1..f_r` and `f_j(0)`, up to `t^order`.
///
/// Each Picard pass fixes one more Taylor coefficient, so `order` passes
/// give the exact truncation.
pub fn integrate_tangent_system<T: Scalar>(
    a: &TangentMatrix<T>,
    leading: &[Series<T>],
    initial: &[T],
    order: usize,
) -> Result<Vec<Series<T>>> {
    if order == 0 {
        return domain("truncation order must be at least 1");
    }
    let (n, r) = (a.n, a.r);
    if leading.len() != r || initial.len() != n - r {
        return dimension(format!("expected {} leading series and {} initial values", r, n - r));
    }
    if leading.iter().any(|s| s.order() < order) {
        return domain("leading components are not known to the requested order");
    }
    let lead: Vec<Series<T>> = leading.iter().map(|s| s.truncate(order)).collect();
    let dlead: Vec<Series<T>> = lead.iter().map(Series::derivative).collect();
    let mut rest: Vec<Series<T>> = initial.iter().map(|c| Series::constant(order, c.clone())).collect();
    for _ in 0..order {
        let full: Vec<Series<T>> = lead.iter().chain(rest.iter()).cloned().collect();
        rest = (0..n - r)
            .map(|j| {
                let mut rhs = Series::zero(order - 1);
                for (k, dk) in dlead.iter().enumerate() {
                    rhs = rhs.add(&a.entry(j, k).eval_series(&full).mul(dk));
                }
                rhs.integrate(initial[j].clone())
            })
            .collect();
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use num_rational::BigRational;

    #[test]
    fn zero_matrix_keeps_initial_values() {
        let a = TangentMatrix::<BigRational>::zero(3, 1).unwrap();
        let lead = vec![Series::from_coeffs(vec![int(0), int(1), int(2), int(3)])];
        let out = integrate_tangent_system(&a, &lead, &[int(5), rational(1, 2)], 3).unwrap();
        assert_eq!(out[0], Series::constant(3, int(5)));
        assert_eq!(out[1], Series::constant(3, rational(1, 2)));
    }

    #[test]
    fn constant_slope() {
        let c = rational(-2, 3);
        let a = TangentMatrix::from_fn(2, 1, |_, _| Poly::constant(2, c.clone())).unwrap();
        let f1 = Series::from_coeffs(vec![int(1), int(2), rational(1, 5), int(-1), int(4)]);
        let out = integrate_tangent_system(&a, std::slice::from_ref(&f1), &[int(7)], 4).unwrap();
        // f2 = f2(0) + c (f1 - f1(0))
        let expect = f1.add(&Series::constant(4, int(-1))).scale(&c).add(&Series::constant(4, int(7)));
        assert_eq!(out[0], expect);
    }

    #[test]
    fn order_zero_rejected() {
        let a = TangentMatrix::<BigRational>::zero(2, 1).unwrap();
        let lead = vec![Series::constant(2, int(0))];
        assert!(integrate_tangent_system(&a, &lead, &[int(0)], 0).is_err());
    }
}
