//! Closed-form cohomology of line bundles on the model manifolds.

use super::manifold::ModelKind;
use crate::error::{dimension, Result};

/// `(h^0, h^1)` of `O(p)` on `P^1`.
pub fn p1_line(p: i128) -> [u128; 2] {
    [(p + 1).max(0) as u128, (-p - 1).max(0) as u128]
}

/// `(h^0, h^1, h^2)` of `O(p)` on `P^2`.
pub fn p2_line(p: i128) -> [u128; 3] {
    let h0 = if p >= 0 { ((p + 1) * (p + 2) / 2) as u128 } else { 0 };
    // Serre duality with K = O(-3)
    let h2 = if p <= -3 { ((-p - 1) * (-p - 2) / 2) as u128 } else { 0 };
    [h0, 0, h2]
}

/// `h^q(X, L^m)` for `L = O(d)` on `P1`/`P2` or `O(a, b)` on `P1xP1`,
/// `q = 0..n`. Products use the Künneth formula.
pub fn exact_cohomology(model: ModelKind, degrees: &[i64], m: u64) -> Result<Vec<u128>> {
    let scaled: Vec<i128> = degrees.iter().map(|&d| d as i128 * m as i128).collect();
    match (model, scaled.as_slice()) {
        (ModelKind::P1, &[p]) => Ok(p1_line(p).to_vec()),
        (ModelKind::P2, &[p]) => Ok(p2_line(p).to_vec()),
        (ModelKind::P1xP1, &[p, q]) => {
            let (a, b) = (p1_line(p), p1_line(q));
            let mut h = vec![0u128; 3];
            for i in 0..2 {
                for j in 0..2 {
                    h[i + j] += a[i] * b[j];
                }
            }
            Ok(h)
        }
        _ => dimension(format!("{} line bundles take {} degree(s), got {}", model, if model == ModelKind::P1xP1 { 2 } else { 1 }, degrees.len())),
    }
}

/// `chi(L^m)` from [`exact_cohomology`].
pub fn euler_characteristic(model: ModelKind, degrees: &[i64], m: u64) -> Result<i128> {
    Ok(exact_cohomology(model, degrees, m)?
        .iter()
        .enumerate()
        .map(|(q, &h)| if q % 2 == 0 { h as i128 } else { -(h as i128) })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(exact_cohomology(ModelKind::P1, &[3], 2).unwrap(), vec![7, 0]);
        assert_eq!(exact_cohomology(ModelKind::P1xP1, &[1, -2], 3).unwrap(), vec![0, 20, 0]);
        for m in 1..5 {
            assert_eq!(exact_cohomology(ModelKind::P1, &[-1], m).unwrap(), vec![0, m as u128 - 1]);
        }
        assert_eq!(exact_cohomology(ModelKind::P1, &[-1], 1).unwrap(), vec![0, 0]);
    }

    #[test]
    fn p1_degree_minus_one_vanishes() {
        assert_eq!(p1_line(-1), [0, 0]);
    }

    #[test]
    fn p2_values() {
        assert_eq!(exact_cohomology(ModelKind::P2, &[1], 2).unwrap(), vec![6, 0, 0]);
        assert_eq!(exact_cohomology(ModelKind::P2, &[-1], 4).unwrap(), vec![0, 0, 3]);
        assert_eq!(p2_line(-1), [0, 0, 0]);
        assert_eq!(p2_line(-2), [0, 0, 0]);
        // chi(O(p)) = (p+1)(p+2)/2 for every p
        for p in -8..8i128 {
            assert_eq!(euler_characteristic(ModelKind::P2, &[p as i64], 1).unwrap(), (p + 1) * (p + 2) / 2);
        }
    }

    #[test]
    fn wrong_parameter_count() {
        assert!(exact_cohomology(ModelKind::P1xP1, &[1], 1).is_err());
    }
}
