use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lp::feasible;
use crate::error::{dimension, domain, Result};

/// A monomial ideal of `C{x_1, ..., x_n}` given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(gens: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
    let unique: BTreeSet<Vec<u32>> = gens.into_iter().collect();
    let mut out: Vec<Vec<u32>> = unique.iter().filter(|g| !unique.iter().any(|h| h != *g && divides(h, g))).cloned().collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

impl MonomialIdeal {
    /// The ideal generated by `x^g`, `g` in `generators`; redundant
    /// generators are dropped.
    pub fn new(n: usize, generators: Vec<Vec<u32>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != n) {
            return dimension(format!("every exponent vector must have {n} entries"));
        }
        Ok(MonomialIdeal { n, generators: minimalize(generators) })
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal { n, generators: vec![] }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal { n, generators: vec![vec![0; n]] }
    }

    /// The maximal ideal `(x_1, ..., x_n)`.
    pub fn maximal(n: usize) -> Self {
        let gens: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        MonomialIdeal { n, generators: minimalize(gens) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Minimal generators, in decreasing lexicographic order.
    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Whether `x^beta` lies in the ideal.
    pub fn contains(&self, beta: &[u32]) -> bool {
        self.generators.iter().any(|g| divides(g, beta))
    }

    pub fn product(&self, other: &MonomialIdeal) -> Result<Self> {
        if self.n != other.n {
            return dimension("ideals in different numbers of variables");
        }
        let gens = self.generators.iter().flat_map(|a| other.generators.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()));
        Ok(MonomialIdeal { n: self.n, generators: minimalize(gens) })
    }

    pub fn power(&self, e: u32) -> Self {
        (0..e).fold(MonomialIdeal::unit(self.n), |acc, _| acc.product(self).expect("same ambient space"))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| match (self.n, i) {
            (2 | 3, 0) => "x".to_string(),
            (2 | 3, 1) => "y".to_string(),
            (3, 2) => "z".to_string(),
            _ => format!("x{}", i + 1),
        };
        let mono = |g: &Vec<u32>| {
            let parts: Vec<String> = g
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("")
            }
        };
        write!(f, "({})", self.generators.iter().map(mono).collect::<Vec<_>>().join(", "))
    }
}

/// A positive rational exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPower(BigRational);

impl RationalPower {
    pub fn new(p: BigRational) -> Result<Self> {
        if !p.is_positive() {
            return domain(format!("exponent must be positive, got {p}"));
        }
        Ok(RationalPower(p))
    }

    pub fn integer(p: u32) -> Result<Self> {
        Self::new(BigRational::from_integer(p.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

/// Whether `beta` lies in `p * Newt(I)`, `Newt(I) = conv(generators) + R^n_{>=0}`,
/// i.e. whether `x^beta` is in the integral closure of `I^p`.
///
/// Decided exactly: `beta = sum_j lambda_j p g_j + s` with `lambda, s >= 0`
/// and `sum_j lambda_j = 1`.
pub fn membership(ideal: &MonomialIdeal, p: &RationalPower, beta: &[u32]) -> Result<bool> {
    if beta.len() != ideal.n {
        return dimension(format!("exponent vector of length {} in {} variables", beta.len(), ideal.n));
    }
    Ok(member(ideal, p.value(), beta))
}

fn member(ideal: &MonomialIdeal, p: &BigRational, beta: &[u32]) -> bool {
    if ideal.is_zero() {
        return false;
    }
    let scaled = |g: &[u32], i: usize| p * BigRational::from_integer(g[i].into());
    // a rounded-up vertex below beta settles it without the LP
    if ideal.generators.iter().any(|g| (0..ideal.n).all(|i| scaled(g, i) <= BigRational::from_integer(beta[i].into()))) {
        return true;
    }
    let (m, n) = (ideal.generators.len(), ideal.n);
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut row: Vec<BigRational> = ideal.generators.iter().map(|g| scaled(g, i)).collect();
        row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(u8::from(i == j)))));
        a.push(row);
        b.push(BigRational::from_integer(beta[i].into()));
    }
    let mut last = vec![BigRational::one(); m];
    last.extend(vec![BigRational::zero(); n]);
    a.push(last);
    b.push(BigRational::one());
    feasible(&a, &b)
}

fn ceil_u32(q: &BigRational) -> u32 {
    let c = q.numer().div_ceil(q.denom());
    u32::try_from(c).expect("exponent fits in u32")
}

/// The monomial ideal `closure(I^p)` of all `x^beta` with `beta` in `p * Newt(I)`.
///
/// A minimal generator `beta` satisfies `beta_i <= max_j ceil(p g_{j,i})`
/// (otherwise `beta - e_i` would still dominate the same point of
/// `p * Newt(I)`), so the lattice points of that box are enough.
pub fn closure_power(ideal: &MonomialIdeal, p: &RationalPower) -> Result<MonomialIdeal> {
    if ideal.is_zero() {
        return domain("the zero ideal has no Newton polyhedron");
    }
    let n = ideal.n;
    let bound: Vec<u32> = (0..n)
        .map(|i| ideal.generators.iter().map(|g| ceil_u32(&(p.value() * BigRational::from_integer(g[i].into())))).max().unwrap_or(0))
        .collect();
    let dims: Vec<usize> = bound.iter().map(|&b| b as usize + 1).collect();
    let total: usize = dims.iter().product();
    let decode = |mut idx: usize| -> Vec<u32> {
        dims.iter()
            .map(|&d| {
                let v = idx % d;
                idx /= d;
                v as u32
            })
            .collect()
    };
    let inside: Vec<bool> = (0..total).map(|idx| member(ideal, p.value(), &decode(idx))).collect();
    let mut strides = vec![1usize; n];
    for i in 1..n {
        strides[i] = strides[i - 1] * dims[i - 1];
    }
    let gens = (0..total).filter(|&idx| inside[idx]).map(decode).filter(|beta| {
        let idx: usize = beta.iter().zip(&strides).map(|(b, s)| *b as usize * s).sum();
        (0..n).all(|i| beta[i] == 0 || !inside[idx - strides[i]])
    });
    MonomialIdeal::new(n, gens.collect())
}

/// The bounded pluricanonical sheaf of the Euler vector field on `C^n`
/// near 0: `L^{(x) m} (x) closure(m_0^m)`, with `line_power = m` standing for
/// the invertible factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedCanonical {
    pub line_power: u32,
    pub ideal: MonomialIdeal,
}

pub fn euler_canonical_check(n: usize, m: u32) -> Result<BoundedCanonical> {
    if m == 0 || n == 0 {
        return domain("need n >= 1 and m >= 1");
    }
    let ideal = closure_power(&MonomialIdeal::maximal(n), &RationalPower::integer(m)?)?;
    Ok(BoundedCanonical { line_power: m, ideal })
}
