use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::to_f64;

/// Rescaling weights `1 = eps_1 > eps_2 > ... > eps_k > 0` of the jet
/// metric, with `p = lcm(1, ..., k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSchedule {
    eps: Vec<BigRational>,
    p: u64,
}

impl EpsilonSchedule {
    pub fn new(eps: Vec<BigRational>) -> Result<Self> {
        if eps.is_empty() {
            return domain("schedule needs k >= 1 entries");
        }
        if !eps[0].is_one() {
            return domain("eps_1 must be 1");
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) || eps.last().is_some_and(|e| *e <= BigRational::from_integer(0.into())) {
            return domain("eps must be positive and strictly decreasing");
        }
        let p = lcm_upto(eps.len() as u64);
        Ok(EpsilonSchedule { eps, p })
    }

    /// `eps_s = k^{-2(s-1)}`.
    pub fn geometric(k: usize) -> Result<Self> {
        if k == 0 {
            return domain("jet order must be at least 1");
        }
        let kk = BigInt::from(k as u64 * k as u64);
        let mut e = BigRational::one();
        let mut eps = Vec::with_capacity(k);
        for _ in 0..k {
            eps.push(e.clone());
            e /= BigRational::from_integer(kk.clone());
        }
        Self::new(eps)
    }

    pub fn k(&self) -> usize {
        self.eps.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn eps(&self) -> &[BigRational] {
        &self.eps
    }

    pub fn eps_f64(&self) -> Vec<f64> {
        self.eps.iter().map(to_f64).collect()
    }
}

pub(crate) fn lcm_upto(k: u64) -> u64 {
    (1..=k).fold(1u64, |acc, s| acc.lcm(&s))
}
