//! Monomials of the Green-Griffiths graded pieces and their count.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Exponents `(alpha_1, ..., alpha_k)` of a jet monomial
/// `xi_1^alpha_1 ... xi_k^alpha_k`, each `alpha_s` a vector in `N^r`.
///
/// Profiles are ordered graded-lexicographically on the concatenated
/// exponent vector, largest first: higher total degree `sum |alpha_s|`
/// comes first, ties are broken by descending lexicographic order. This is
/// the order used by [`enumerate_profiles`] and by every map keyed on
/// profiles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentProfile {
    alphas: Vec<Vec<u32>>,
}

impl ExponentProfile {
    pub fn new(alphas: Vec<Vec<u32>>) -> Result<Self> {
        let Some(first) = alphas.first() else {
            return domain("a profile needs jet order k >= 1");
        };
        let r = first.len();
        if r == 0 {
            return domain("a profile needs rank r >= 1");
        }
        if alphas.iter().any(|a| a.len() != r) {
            return domain("all alpha_s of a profile must have the same length r");
        }
        Ok(ExponentProfile { alphas })
    }

    /// Splits a concatenated exponent vector of length `k * r`.
    pub fn from_concatenated(k: usize, r: usize, flat: &[u32]) -> Result<Self> {
        if k == 0 || r == 0 || flat.len() != k * r {
            return domain(format!("cannot split {} exponents into k={} blocks of r={}", flat.len(), k, r));
        }
        Self::new(flat.chunks(r).map(<[u32]>::to_vec).collect())
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn r(&self) -> usize {
        self.alphas[0].len()
    }

    pub fn alphas(&self) -> &[Vec<u32>] {
        &self.alphas
    }

    /// `alpha_s`, 1-based as in the weight convention.
    pub fn alpha(&self, s: usize) -> &[u32] {
        &self.alphas[s - 1]
    }

    /// `sum_s s |alpha_s|`.
    pub fn weighted_degree(&self) -> u64 {
        self.alphas
            .iter()
            .enumerate()
            .map(|(i, a)| (i as u64 + 1) * a.iter().map(|&e| e as u64).sum::<u64>())
            .sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.alphas.iter().flatten().map(|&e| e as u64).sum()
    }

    pub fn concatenated(&self) -> Vec<u32> {
        self.alphas.concat()
    }

    /// Exponent-wise sum; profiles must share `k` and `r`.
    pub fn combine(&self, other: &Self) -> Result<Self> {
        if self.k() != other.k() || self.r() != other.r() {
            return domain("profiles with different (k, r) cannot be multiplied");
        }
        Self::new(
            self.alphas
                .iter()
                .zip(&other.alphas)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        )
    }
}

impl Ord for ExponentProfile {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| other.alphas.cmp(&self.alphas))
    }
}

impl PartialOrd for ExponentProfile {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_jet_space(k: usize, r: usize) -> Result<()> {
    if k == 0 {
        return domain("jet order k must be at least 1");
    }
    if r == 0 {
        return domain("rank r must be at least 1");
    }
    Ok(())
}

/// Rank of `E^GG_{k,m} V^*`: the number of monomials of weighted degree `m`
/// in `k` blocks of `r` variables, block `s` having weight `s`.
///
/// Computed as the `t^m` coefficient of `prod_{s=1}^k (1 - t^s)^{-r}`.
pub fn dim_gg(k: usize, m: usize, r: usize) -> Result<BigUint> {
    check_jet_space(k, r)?;
    let mut c = vec![BigUint::zero(); m + 1];
    c[0] = BigUint::one();
    for s in 1..=k.min(m) {
        // multiply by 1/(1 - t^s), r times
        for _ in 0..r {
            for i in s..=m {
                let add = c[i - s].clone();
                c[i] += add;
            }
        }
    }
    Ok(c.swap_remove(m))
}

/// All profiles of weighted degree `m`, each exactly once, in the
/// [`ExponentProfile`] order.
pub fn enumerate_profiles(k: usize, m: usize, r: usize) -> Result<std::vec::IntoIter<ExponentProfile>> {
    check_jet_space(k, r)?;
    let mut out = Vec::new();
    let mut current = vec![0u32; k * r];
    fill(0, m as u64, r, &mut current, &mut out);
    let mut profiles: Vec<ExponentProfile> = out
        .into_iter()
        .map(|flat| ExponentProfile::from_concatenated(k, r, &flat))
        .collect::<Result<_>>()?;
    profiles.sort();
    Ok(profiles.into_iter())
}

fn fill(pos: usize, remaining: u64, r: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if pos == current.len() {
        if remaining == 0 {
            out.push(current.clone());
        }
        return;
    }
    let weight = (pos / r + 1) as u64;
    for e in 0..=remaining / weight {
        current[pos] = e as u32;
        fill(pos + 1, remaining - e * weight, r, current, out);
    }
    current[pos] = 0;
}
