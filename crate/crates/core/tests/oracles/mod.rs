//! Independent reference computations for the test suites.
#![allow(dead_code)]

use jetmorse::jet_algebra::{JetPoint, Poly, Series, TruncatedMap};
use jetmorse::morse::{P1Point, QDivisorMetricP1};
use jetmorse::scalar::{factorial, int};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

/// Jet of `psi o f` by composing truncated power series, with `f` the
/// polynomial curve `t -> base + sum_s xi_s t^s / s!`.
pub fn push_by_series(psi: &TruncatedMap<Q>, jet: &JetPoint<Q>) -> JetPoint<Q> {
    let k = jet.order();
    let n = jet.base().len();
    let curve: Vec<Series<Q>> = (0..n)
        .map(|i| {
            let ds: Vec<Q> = jet.xis().iter().map(|xi| xi[i].clone()).collect();
            Series::from_derivatives(jet.base()[i].clone(), &ds)
        })
        .collect();
    let image: Vec<Series<Q>> = psi.components().iter().map(|c| c.eval_series(&curve)).collect();
    let base = image.iter().map(|s| s.coeff(0)).collect();
    let xis = (1..=k)
        .map(|s| image.iter().map(|ser| ser.coeff(s) * factorial::<Q>(s as u64)).collect())
        .collect();
    JetPoint::new(base, xis).unwrap()
}

/// Number of nonnegative integer solutions of `sum_s s |alpha_s| = m`
/// with `alpha_s` in `N^r`, by direct recursion over all entries.
pub fn count_profiles(k: usize, m: usize, r: usize) -> u128 {
    fn go(slot: usize, k: usize, r: usize, left: usize) -> u128 {
        if slot == k * r {
            return u128::from(left == 0);
        }
        let weight = slot / r + 1;
        (0..=left / weight).map(|e| go(slot + 1, k, r, left - e * weight)).sum()
    }
    go(0, k, r, m)
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Nonnegative normals that include every facet normal of
/// `conv(gens) + R^n_{>=0}`, for `n <= 3`.
pub fn candidate_normals(gens: &[Vec<u32>]) -> Vec<Vec<i64>> {
    let n = gens[0].len();
    let mut dirs: Vec<[i64; 3]> = (0..n).map(|i| {
        let mut e = [0; 3];
        e[i] = 1;
        e
    }).collect();
    for a in gens {
        for b in gens {
            let mut d = [0; 3];
            for i in 0..n {
                d[i] = a[i] as i64 - b[i] as i64;
            }
            if d != [0; 3] {
                dirs.push(d);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut push = |w: Vec<i64>| {
        let w = if w.iter().all(|&x| x <= 0) { w.iter().map(|x| -x).collect() } else { w };
        if w.iter().all(|&x| x >= 0) && w.iter().any(|&x| x > 0) && !out.contains(&w) {
            out.push(w);
        }
    };
    match n {
        1 => push(vec![1]),
        2 => {
            for d in &dirs {
                push(vec![-d[1], d[0]]);
            }
        }
        3 => {
            for a in &dirs {
                for b in &dirs {
                    push(cross(a, b).to_vec());
                }
            }
        }
        _ => panic!("oracle supports n <= 3"),
    }
    out
}

/// `beta` in `p * Newt(gens)` by checking every supporting half-space
/// `<w, beta> >= p min_g <w, g>`.
pub fn facet_member(gens: &[Vec<u32>], normals: &[Vec<i64>], p: &Q, beta: &[u32]) -> bool {
    normals.iter().all(|w| {
        let dot = |v: &[u32]| w.iter().zip(v).map(|(a, b)| a * *b as i64).sum::<i64>();
        let lo = gens.iter().map(|g| dot(g)).min().unwrap();
        int(dot(beta)) >= p * int(lo)
    })
}

/// Minimal lattice points of `p * Newt(gens)` inside the box `[0, bound]^n`.
pub fn facet_closure(gens: &[Vec<u32>], p: &Q, bound: u32) -> Vec<Vec<u32>> {
    let n = gens[0].len();
    let normals = candidate_normals(gens);
    let mut all = vec![vec![]];
    for _ in 0..n {
        all = all.into_iter().flat_map(|v: Vec<u32>| (0..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    let inside = |b: &[u32]| facet_member(gens, &normals, p, b);
    let mut out: Vec<Vec<u32>> = all
        .into_iter()
        .filter(|b| inside(b))
        .filter(|b| (0..n).all(|i| b[i] == 0 || { let mut c = b.clone(); c[i] -= 1; !inside(&c) }))
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the rational functions `f` on `P^1` with `div f + m d [inf] >= ceil(m D)`
/// pointwise, counted as polynomials `g = f prod (z - a)^{poles}` of bounded degree
/// subject to Taylor conditions at each finite point.
pub fn laurent_sections(metric: &QDivisorMetricP1, m: u64) -> u128 {
    let md = metric.degree() * m as i64;
    let orders: Vec<(P1Point, i64)> = metric
        .weights()
        .iter()
        .map(|(p, l)| {
            let c = (l * int(m as i64)).ceil().to_integer();
            (p.clone(), i64::try_from(c).unwrap())
        })
        .collect();
    let poles: i64 = orders.iter().filter(|(p, _)| *p != P1Point::Infinity).map(|(_, c)| (-c).max(0)).sum();
    let at_inf = orders.iter().find(|(p, _)| *p == P1Point::Infinity).map_or(0, |(_, c)| *c);
    let top = md + poles - at_inf;
    if top < 0 {
        return 0;
    }
    let basis = (top + 1) as usize;
    let mut conditions = Vec::new();
    for (p, c) in &orders {
        let P1Point::Finite(a) = p else { continue };
        // g must vanish to order max(c, 0) at a: coefficients of (z - a)^i, i < order
        let pows: Vec<Q> = std::iter::successors(Some(int(1)), |x| Some(x * a)).take(basis).collect();
        let mut binom = vec![BigInt::from(1); basis];
        for i in 0..(*c).max(0) as usize {
            if i > 0 {
                // binom[j] = C(j, i) from C(j, i - 1)
                for j in (0..basis).rev() {
                    binom[j] = if j < i { BigInt::from(0) } else { &binom[j] * BigInt::from(j + 1 - i) / BigInt::from(i) };
                }
            }
            conditions.push((0..basis).map(|j| if j < i { Q::zero() } else { Q::from_integer(binom[j].clone()) * &pows[j - i] }).collect());
        }
    }
    let rk = if conditions.is_empty() { 0 } else { rank(conditions) };
    (basis - rk) as u128
}

/// Deterministic pseudo-random rational in `[-4, 4]` with small denominator.
pub fn small_rational(state: &mut u64) -> Q {
    *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let num = ((*state >> 33) % 9) as i64 - 4;
    let den = ((*state >> 20) % 3) as i64 + 1;
    jetmorse::scalar::rational(num, den)
}

/// A random polynomial map `C^n -> C^n` of degree `<= deg`, optionally fixing 0.
pub fn random_map(state: &mut u64, n: usize, deg: u32, order: u32, fix_origin: bool) -> TruncatedMap<Q> {
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..n {
        exps = exps.into_iter().flat_map(|e| (0..=deg).map(move |x| [e.clone(), vec![x]].concat())).collect();
    }
    exps.retain(|e| e.iter().sum::<u32>() <= deg && (!fix_origin || e.iter().sum::<u32>() > 0));
    let comps = (0..n)
        .map(|_| Poly::from_terms(n, exps.iter().map(|e| (e.clone(), small_rational(state)))).unwrap())
        .collect();
    TruncatedMap::new(comps, order).unwrap()
}

pub fn random_jet(state: &mut u64, n: usize, k: usize, base_zero: bool) -> JetPoint<Q> {
    let base = (0..n).map(|_| if base_zero { Q::zero() } else { small_rational(state) }).collect();
    let xis = (0..k).map(|_| (0..n).map(|_| small_rational(state)).collect()).collect();
    JetPoint::new(base, xis).unwrap()
}

pub fn is_nonnegative(q: &Q) -> bool {
    !q.is_negative()
}
