use serde::{Deserialize, Serialize};

use super::field::CurvatureField;
use super::hermitian::relative_signature;
use super::manifold::{GridSpec, ModelKind};
use crate::parallel::{map_chunks, CHUNK};

/// Default relative eigenvalue tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default degenerate-mass fraction above which a spectrum is flagged.
pub const DEFAULT_DEGENERATE_THRESHOLD: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MorseOptions {
    /// Eigenvalues with `|lambda| <= tol * max|lambda|` count as zero.
    pub tol: f64,
    pub degenerate_threshold: f64,
    pub threads: Option<usize>,
}

impl Default for MorseOptions {
    fn default() -> Self {
        MorseOptions { tol: DEFAULT_TOL, degenerate_threshold: DEFAULT_DEGENERATE_THRESHOLD, threads: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub model: ModelKind,
    pub grid: GridSpec,
    pub cells: usize,
    pub tol: f64,
}

/// Signed index integrals `I_q = int_{X(u,q)} (-1)^q u^n`, `q = 0..n`.
///
/// With the sign folded in, every `I_q` is nonnegative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseSpectrum {
    pub integrals: Vec<f64>,
    /// Plain `int_X u^n` over every cell, degenerate ones included.
    pub total: f64,
    /// Fraction of the volume whose form has a (near-)zero eigenvalue.
    pub degenerate_mass: f64,
    /// Fraction of the volume in each index set `X(u, q)`.
    pub index_mass: Vec<f64>,
    /// Set when `degenerate_mass` exceeds the configured threshold.
    pub flagged: bool,
    pub grid: GridMeta,
}

impl MorseSpectrum {
    pub fn n(&self) -> usize {
        self.integrals.len() - 1
    }

    /// `I_q`, zero outside `0..=n`.
    pub fn get(&self, q: isize) -> f64 {
        if q < 0 {
            return 0.0;
        }
        self.integrals.get(q as usize).copied().unwrap_or(0.0)
    }

    /// A spectrum given directly by its integrals, for bound arithmetic.
    pub fn from_integrals(model: ModelKind, integrals: Vec<f64>) -> Self {
        let n = integrals.len() - 1;
        let total = integrals.iter().enumerate().map(|(q, i)| if q % 2 == 0 { *i } else { -*i }).sum();
        MorseSpectrum {
            integrals,
            total,
            degenerate_mass: 0.0,
            index_mass: vec![0.0; n + 1],
            flagged: false,
            grid: GridMeta { model, grid: GridSpec::new(0, 0), cells: 0, tol: DEFAULT_TOL },
        }
    }
}

#[derive(Clone, Debug)]
struct Partial {
    integrals: Vec<f64>,
    mass: Vec<f64>,
    degenerate: f64,
    total: f64,
}

impl Partial {
    fn zero(n: usize) -> Self {
        Partial { integrals: vec![0.0; n + 1], mass: vec![0.0; n + 1], degenerate: 0.0, total: 0.0 }
    }

    fn absorb(&mut self, other: &Partial) {
        for (a, b) in self.integrals.iter_mut().zip(&other.integrals) {
            *a += b;
        }
        for (a, b) in self.mass.iter_mut().zip(&other.mass) {
            *a += b;
        }
        self.degenerate += other.degenerate;
        self.total += other.total;
    }
}

pub fn morse_integrals(field: &CurvatureField, tol: f64) -> MorseSpectrum {
    morse_integrals_with(field, &MorseOptions { tol, ..MorseOptions::default() })
}

/// Midpoint quadrature of the index integrals.
///
/// Each cell is assigned to `X(u, q)` with `q` the number of negative
/// eigenvalues; cells with a zero eigenvalue only add to `degenerate_mass`.
pub fn morse_integrals_with(field: &CurvatureField, opts: &MorseOptions) -> MorseSpectrum {
    let model = field.model();
    let n = model.dim();
    let cells = model.cells();
    let parts = map_chunks(cells.len(), CHUNK, opts.threads, |_, range| {
        let mut p = Partial::zero(n);
        for cell in &cells[range] {
            let u = field.at(&cell.point);
            let det = u.determinant();
            p.total += det * cell.volume;
            match relative_signature(&u, opts.tol).index() {
                Some(q) => {
                    let signed = if q % 2 == 0 { det } else { -det };
                    p.integrals[q] += signed * cell.volume;
                    p.mass[q] += cell.volume;
                }
                None => p.degenerate += cell.volume,
            }
        }
        p
    });
    let mut acc = Partial::zero(n);
    for p in &parts {
        acc.absorb(p);
    }
    let volume = model.reference_volume();
    let degenerate_mass = acc.degenerate / volume;
    MorseSpectrum {
        integrals: acc.integrals,
        total: acc.total,
        degenerate_mass,
        index_mass: acc.mass.iter().map(|m| m / volume).collect(),
        flagged: degenerate_mass > opts.degenerate_threshold,
        grid: GridMeta { model: model.kind(), grid: model.grid(), cells: cells.len(), tol: opts.tol },
    }
}

/// `int_X u^n` without index partitioning.
pub fn plain_integral(field: &CurvatureField, threads: Option<usize>) -> f64 {
    let cells = field.model().cells();
    map_chunks(cells.len(), CHUNK, threads, |_, range| {
        cells[range].iter().map(|c| field.at(&c.point).determinant() * c.volume).sum::<f64>()
    })
    .into_iter()
    .sum()
}

fn dominant_factor(m: u64, r: u64, n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|i| i as f64).product();
    r as f64 * (m as f64).powi(n as i32) / fact
}

/// `r m^n / n! * I_q`, the dominant term of the upper bound on `h^q`.
pub fn wm_bound(q: usize, m: u64, r: u64, spectrum: &MorseSpectrum) -> f64 {
    dominant_factor(m, r, spectrum.n()) * spectrum.get(q as isize)
}

/// Dominant term of the strong Morse inequality,
/// `r m^n / n! * sum_{j <= q} (-1)^q int_{X(j)} u^n`.
///
/// Since `int_{X(j)} u^n = (-1)^j I_j`, the summand is `(-1)^{q-j} I_j`.
/// At `q = n` the sum is `(-1)^n int_X u^n`, the Riemann-Roch term up to
/// the sign of `sum_{j<=n} (-1)^{n-j} h^j = (-1)^n chi`.
pub fn sm_alternating(q: usize, m: u64, r: u64, spectrum: &MorseSpectrum) -> f64 {
    let sum: f64 = (0..=q.min(spectrum.n()))
        .map(|j| if (q - j).is_multiple_of(2) { spectrum.integrals[j] } else { -spectrum.integrals[j] })
        .sum();
    dominant_factor(m, r, spectrum.n()) * sum
}

/// `r m^n / n! * int_X Theta^n`, computed without the index partition.
pub fn rr_estimate(m: u64, r: u64, field: &CurvatureField) -> f64 {
    dominant_factor(m, r, field.model().dim()) * plain_integral(field, None)
}

/// Dominant term of the lower bound
/// `h^q >= r m^n / n! * (I_q - I_{q-1} - I_{q+1})`; for `q = 0` this is
/// `r m^n / n! * (I_0 - I_1)`.
pub fn lower_bound_q(q: usize, m: u64, r: u64, spectrum: &MorseSpectrum) -> f64 {
    let q = q as isize;
    dominant_factor(m, r, spectrum.n()) * (spectrum.get(q) - spectrum.get(q - 1) - spectrum.get(q + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::manifold::ModelManifold;

    fn field(kind: ModelKind, bands: usize, desc: &str) -> CurvatureField {
        CurvatureField::parse(ModelManifold::new(kind, GridSpec::new(bands, 1)).unwrap(), desc).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9 * (1.0 + b.abs())
    }

    #[test]
    fn positive_line_on_p1() {
        let s = morse_integrals(&field(ModelKind::P1, 32, "3*w"), DEFAULT_TOL);
        assert!(close(s.integrals[0], 3.0) && close(s.integrals[1], 0.0));
        assert_eq!(s.degenerate_mass, 0.0);
        assert!(close(wm_bound(0, 10, 1, &s), 30.0));
    }

    #[test]
    fn product_signatures() {
        let s = morse_integrals(&field(ModelKind::P1xP1, 16, "2*w1+3*w2"), DEFAULT_TOL);
        assert!(close(s.integrals[0], 12.0) && close(s.integrals[1], 0.0) && close(s.integrals[2], 0.0));
        let s = morse_integrals(&field(ModelKind::P1xP1, 16, "2*w1-3*w2"), DEFAULT_TOL);
        assert!(close(s.integrals[0], 0.0) && close(s.integrals[1], 12.0) && close(s.integrals[2], 0.0));
        assert!(close(s.total, -12.0));
        assert!(close(wm_bound(1, 50, 1, &s), 2500.0 * 6.0));
        assert!(close(sm_alternating(1, 10, 1, &s), 100.0 * 6.0));
        assert!(close(lower_bound_q(0, 10, 1, &s), -600.0));
    }

    #[test]
    fn degenerate_cells_are_flagged() {
        let s = morse_integrals(&field(ModelKind::P1xP1, 8, "w1"), DEFAULT_TOL);
        assert_eq!(s.degenerate_mass, 1.0);
        assert!(s.flagged);
        assert!(s.integrals.iter().all(|&i| i == 0.0));
        assert_eq!(rr_estimate(10, 1, &field(ModelKind::P1xP1, 8, "w1")), 0.0);
    }

    #[test]
    fn strong_morse_at_top_degree_is_riemann_roch() {
        let f = field(ModelKind::P1, 64, "1*w + 3*h");
        let s = morse_integrals(&f, DEFAULT_TOL);
        let n = s.n() as i32;
        let sm = sm_alternating(s.n(), 7, 2, &s);
        assert!(close((-1f64).powi(n) * sm, rr_estimate(7, 2, &f)));
        assert!(close(sm_alternating(0, 7, 2, &s), wm_bound(0, 7, 2, &s)));
    }
}
