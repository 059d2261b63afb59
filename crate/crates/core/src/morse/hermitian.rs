use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{dimension, domain, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// A real (1,1)-form `u = i sum u_jk dz_j ^ dzbar_k`, stored as its
/// Hermitian matrix in a unitary frame of the reference Kähler metric.
///
/// The reference form itself is the identity, so eigenvalues are measured
/// against it and `u^n = det(u) omega^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianForm {
    /// Row-major entries. Matrices off Hermitian by more than `1e-12`
    /// (relative to their largest entry) are rejected; the rest are
    /// symmetrized.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return dimension(format!("{} entries for a {}x{} form", entries.len(), n, n));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let mut sym = entries.clone();
        for i in 0..n {
            for j in 0..n {
                let a = entries[i * n + j];
                let b = entries[j * n + i].conj();
                if (a - b).norm() > HERMITIAN_TOL * scale {
                    return domain(format!("entry ({}, {}) breaks Hermitian symmetry", i, j));
                }
                sym[i * n + j] = (a + b) * 0.5;
            }
        }
        Ok(HermitianForm { n, entries: sym })
    }

    pub fn zero(n: usize) -> Self {
        HermitianForm { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut f = Self::zero(n);
        for (i, &v) in values.iter().enumerate() {
            f.entries[i * n + i] = Complex64::new(v, 0.0);
        }
        f
    }

    /// From real symmetric entries (row-major).
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(n, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        HermitianForm {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianForm { n: self.n, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entries[i * self.n + i].re).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.n {
            0 => vec![],
            1 => vec![self.entries[0].re],
            2 => {
                let (a, d) = (self.entries[0].re, self.entries[3].re);
                let b = self.entries[1];
                let mean = 0.5 * (a + d);
                let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
                vec![mean - rad, mean + rad]
            }
            n => {
                let m = DMatrix::from_row_slice(n, n, &self.entries);
                let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
                ev.sort_by(f64::total_cmp);
                ev
            }
        }
    }

    /// `det(u)`, so that `u^n = det(u) omega^n`.
    pub fn determinant(&self) -> f64 {
        match self.n {
            0 => 1.0,
            1 => self.entries[0].re,
            2 => self.entries[0].re * self.entries[3].re - self.entries[1].norm_sqr(),
            _ => self.eigenvalues().iter().product(),
        }
    }
}

/// Counts of positive, negative and (near-)zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    fn of(eigenvalues: &[f64], tol: f64) -> Self {
        let mut s = Signature { positive: 0, negative: 0, zero: 0 };
        for &l in eigenvalues {
            if l > tol {
                s.positive += 1;
            } else if l < -tol {
                s.negative += 1;
            } else {
                s.zero += 1;
            }
        }
        s
    }

    /// Morse index `q`, or `None` on the degenerate locus.
    pub fn index(&self) -> Option<usize> {
        (self.zero == 0).then_some(self.negative)
    }
}

/// Eigenvalues `> tol`, `< -tol` and in `[-tol, tol]`.
pub fn signature(u: &HermitianForm, tol: f64) -> Signature {
    Signature::of(&u.eigenvalues(), tol)
}

/// Signature with `tol` taken relative to the largest `|eigenvalue|`.
pub fn relative_signature(u: &HermitianForm, rel_tol: f64) -> Signature {
    let ev = u.eigenvalues();
    let scale = ev.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    Signature::of(&ev, rel_tol * scale)
}
