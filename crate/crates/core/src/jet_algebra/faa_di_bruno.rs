//! Coefficients of the chain rule for higher derivatives of a composition.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{domain, Result};

/// The expansion
/// `(Psi o f)^(j) = Psi'(f) f^(j) + sum c_{j_1..j_s} Psi^(s)(f)(f^(j_1), ..., f^(j_s))`.
///
/// Keys are nondecreasing tuples `j_1 <= ... <= j_s` summing to `j`; the
/// coefficient counts every ordering of the tuple, so that each multilinear
/// term is evaluated once with its symmetrized weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaaDiBrunoTable {
    order: usize,
    terms: BTreeMap<Vec<usize>, BigUint>,
}

impl FaaDiBrunoTable {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `Psi'(f) f^(j)`, always 1.
    pub fn leading(&self) -> BigUint {
        BigUint::one()
    }

    /// The `s >= 2` terms.
    pub fn higher_terms(&self) -> impl Iterator<Item = (&Vec<usize>, &BigUint)> {
        self.terms.iter().filter(|(k, _)| k.len() >= 2)
    }

    /// Every term, the leading `[j] -> 1` included.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &BigUint)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Option<&BigUint> {
        let mut key = tuple.to_vec();
        key.sort_unstable();
        self.terms.get(&key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Builds the table for derivative order `j` by differentiating the
/// expansion of order `j - 1` term by term.
///
/// `d/dt Psi^(s)(f)(f^(j_1), ..., f^(j_s))` produces
/// `Psi^(s+1)(f)(f', f^(j_1), ...)` plus one term per slot where `j_i`
/// is raised by one.
pub fn faa_di_bruno(j: usize) -> Result<FaaDiBrunoTable> {
    if j == 0 {
        return domain("derivative order must be at least 1");
    }
    let mut terms: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    terms.insert(vec![1], BigUint::one());
    for _ in 1..j {
        let mut next: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
        for (key, c) in &terms {
            let mut grown = key.clone();
            grown.insert(0, 1);
            *next.entry(grown).or_default() += c;
            for i in 0..key.len() {
                let mut bumped = key.clone();
                bumped[i] += 1;
                bumped.sort_unstable();
                *next.entry(bumped).or_default() += c;
            }
        }
        terms = next;
    }
    Ok(FaaDiBrunoTable { order: j, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(j: usize) -> Vec<(Vec<usize>, u64)> {
        faa_di_bruno(j)
            .unwrap()
            .higher_terms()
            .map(|(k, c)| (k.clone(), u64::try_from(c.clone()).unwrap()))
            .collect()
    }

    #[test]
    fn low_orders() {
        assert_eq!(table(1), vec![]);
        assert_eq!(table(2), vec![(vec![1, 1], 1)]);
        assert_eq!(table(3), vec![(vec![1, 1, 1], 1), (vec![1, 2], 3)]);
        let t4 = faa_di_bruno(4).unwrap();
        let get = |k: &[usize]| u64::try_from(t4.coefficient(k).unwrap().clone()).unwrap();
        assert_eq!(get(&[1, 3]), 4);
        assert_eq!(get(&[3, 1]), 4);
        assert_eq!(get(&[2, 2]), 3);
        assert_eq!(get(&[1, 1, 2]), 6);
        assert_eq!(get(&[1, 1, 1, 1]), 1);
        assert_eq!(t4.higher_terms().count(), 4);
        assert_eq!(t4.leading(), BigUint::one());
    }

    #[test]
    fn term_count_is_the_partition_number() {
        // the leading term included, keys are exactly the partitions of j
        let partitions = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (j, &p) in partitions.iter().enumerate().skip(1) {
            assert_eq!(faa_di_bruno(j).unwrap().len(), p);
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(faa_di_bruno(0).is_err());
    }
}
