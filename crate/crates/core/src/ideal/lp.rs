//! Exact feasibility of `{x >= 0 : A x = b}` by the phase-one simplex method.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Phase one with Bland's rule, which cannot cycle.
pub(crate) fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let nv = a[0].len();
    let cols = nv + m;
    let mut t: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let flip = bi.is_negative();
            let mut r: Vec<BigRational> = row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
            r.extend((0..m).map(|j| BigRational::from_integer((i == j).into())));
            r.push(if flip { -bi.clone() } else { bi.clone() });
            r
        })
        .collect();
    let mut basis: Vec<usize> = (nv..cols).collect();
    let artificial = |j: usize| j >= nv;
    loop {
        // reduced cost of column j for the objective sum of artificials
        let entering = (0..cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = if artificial(j) { BigRational::from_integer(1.into()) } else { BigRational::zero() };
            for (i, &bv) in basis.iter().enumerate() {
                if artificial(bv) {
                    rc -= &t[i][j];
                }
            }
            rc.is_negative()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if t[i][j].is_positive() {
                let ratio = &t[i][cols] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let pivot = t[p][j].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[j].is_zero() {
                let f = row[j].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        basis[p] = j;
    }
    basis.iter().enumerate().all(|(i, &bv)| !artificial(bv) || t[i][cols].is_zero())
}
