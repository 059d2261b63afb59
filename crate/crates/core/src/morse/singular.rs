//! Bounded sections for metrics with rational divisorial singularities on `P^1`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum P1Point {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(q) => write!(f, "{}", q),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

/// Metric on `O(d)` with weight `|s|^2 ~ |z - p_j|^{-2 lambda_j}` near each
/// marked point: the singularity divisor is `D = sum lambda_j p_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDivisorMetricP1 {
    degree: i64,
    weights: Vec<(P1Point, BigRational)>,
}

impl QDivisorMetricP1 {
    pub fn new(degree: i64, weights: Vec<(P1Point, BigRational)>) -> Result<Self> {
        for (i, (p, l)) in weights.iter().enumerate() {
            if l.is_zero() {
                return domain(format!("weight at {} must be nonzero", p));
            }
            if weights[..i].iter().any(|(q, _)| q == p) {
                return domain(format!("point {} is marked twice", p));
            }
        }
        Ok(QDivisorMetricP1 { degree, weights })
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weights(&self) -> &[(P1Point, BigRational)] {
        &self.weights
    }

    /// `ceil(m lambda_j)` at each point: the round-up of `m D`.
    pub fn rounded_divisor(&self, m: u64) -> Vec<(P1Point, BigInt)> {
        self.weights
            .iter()
            .map(|(p, l)| (p.clone(), (l * BigRational::from_integer(BigInt::from(m))).ceil().to_integer()))
            .collect()
    }
}

/// `h^0` of the sheaf of `h^m`-bounded sections of `O(md)`, i.e. of
/// `O(md - ceil(mD))`: `max(0, md - sum_j ceil(m lambda_j) + 1)`.
///
/// A negative weight rounds up to a nonpositive order, which admits poles
/// at that point and enlarges the space.
pub fn bounded_sections_p1(metric: &QDivisorMetricP1, m: u64) -> Result<u128> {
    if m == 0 {
        return domain("m must be at least 1");
    }
    let rounded: BigInt = metric.rounded_divisor(m).into_iter().map(|(_, c)| c).sum();
    let deg: BigInt = BigInt::from(metric.degree) * BigInt::from(m) - rounded + 1;
    if deg.is_negative() {
        return Ok(0);
    }
    Ok(deg.to_u128().unwrap_or(u128::MAX))
}
