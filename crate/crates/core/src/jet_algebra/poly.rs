//! Sparse multivariate polynomials and univariate truncated power series.

use std::collections::BTreeMap;

use crate::error::{dimension, Result};
use crate::scalar::{from_u64, is_zero, Scalar};

/// A polynomial in `nvars` variables, stored as exponent vector -> coefficient.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The coordinate function `z_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, T::one())
    }

    pub fn monomial(exponents: Vec<u32>, c: T) -> Self {
        let mut p = Self::zero(exponents.len());
        if !is_zero(&c) {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, T)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return dimension(format!("monomial {:?} in a {}-variable polynomial", e, nvars));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: T) {
        if is_zero(&c) {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !is_zero(&s) {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coeff(&self, exponents: &[u32]) -> T {
        self.terms.get(exponents).cloned().unwrap_or_else(T::zero)
    }

    /// Drops every term of total degree above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a.clone() * c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c.clone() * from_u64::<T>(e[i] as u64));
            }
        }
        p
    }

    /// Directional derivative `sum_i v_i d/dz_i`.
    pub fn directional(&self, v: &[T]) -> Self {
        let mut p = Self::zero(self.nvars);
        for (i, vi) in v.iter().enumerate() {
            if !is_zero(vi) {
                p = p.add(&self.derivative(i).scale(vi));
            }
        }
        p
    }

    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.nvars);
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes power series for the variables.
    pub fn eval_series(&self, x: &[Series<T>]) -> Series<T> {
        debug_assert_eq!(x.len(), self.nvars);
        let order = x.iter().map(Series::order).min().unwrap_or(0);
        let powers = power_tables(x, &self.max_exponents(), |a: &Series<T>, b: &Series<T>| a.mul(b), || {
            Series::constant(order, T::one())
        });
        let mut acc = Series::zero(order);
        for (e, c) in &self.terms {
            let mut t = Series::constant(order, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes polynomials for the variables (exact, no truncation).
    pub fn compose(&self, inner: &[Poly<T>]) -> Result<Self> {
        if inner.len() != self.nvars {
            return dimension(format!("{} substitutions for {} variables", inner.len(), self.nvars));
        }
        let m = inner.first().map(Poly::nvars).unwrap_or(0);
        if inner.iter().any(|p| p.nvars != m) {
            return dimension("substituted polynomials live in different rings");
        }
        let powers = power_tables(inner, &self.max_exponents(), |a: &Poly<T>, b: &Poly<T>| a.mul(b), || {
            Poly::constant(m, T::one())
        });
        let mut acc = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut m = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        m
    }
}

fn power_tables<A: Clone>(
    base: &[A],
    max: &[u32],
    mul: impl Fn(&A, &A) -> A,
    one: impl Fn() -> A,
) -> Vec<Vec<A>> {
    base.iter()
        .zip(max)
        .map(|(b, &k)| {
            let mut v = vec![one()];
            for j in 0..k as usize {
                let next = mul(&v[j], b);
                v.push(next);
            }
            v
        })
        .collect()
}

/// Univariate power series `sum_{i <= order} c_i t^i`, truncated at `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Series<T> {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn constant(order: usize, c: T) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        Series { coeffs }
    }

    /// Series of a curve from its derivatives at 0: `c_i = d_i / i!`.
    pub fn from_derivatives(value: T, derivatives: &[T]) -> Self {
        let mut coeffs = vec![value];
        let mut fact = T::one();
        for (i, d) in derivatives.iter().enumerate() {
            fact = fact * from_u64::<T>(i as u64 + 1);
            coeffs.push(d.clone() / fact.clone());
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// `i!` times the `t^i` coefficient, i.e. the i-th derivative at 0.
    pub fn derivative_at_zero(&self, i: usize) -> T {
        self.coeff(i) * crate::scalar::factorial::<T>(i as u64)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, T::zero());
        Series { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Series {
            coeffs: (0..=order).map(|i| self.coeffs[i].clone() + other.coeffs[i].clone()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![T::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs: out }
    }

    /// d/dt; the order drops by one (an order-0 series differentiates to 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Series::zero(0);
        }
        Series {
            coeffs: (1..self.coeffs.len())
                .map(|i| self.coeffs[i].clone() * from_u64::<T>(i as u64))
                .collect(),
        }
    }

    /// Antiderivative with constant term `c`; the order grows by one.
    pub fn integrate(&self, c: T) -> Self {
        let mut coeffs = vec![c];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.clone() / from_u64::<T>(i as u64 + 1));
        }
        Series { coeffs }
    }
}
