//! Morse integrals on the Green-Griffiths tower and the bounds built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curvature::{horizontal_from_tensor, VBundleCurvature};
use super::sampling::{Estimate, FiberSampler, Moments, Proposal};
use super::schedule::EpsilonSchedule;
use crate::error::{dimension, domain, Error, Result};
use crate::morse::{morse_integrals_with, relative_signature, CurvatureField, HermitianForm, MorseOptions, MorseSpectrum, DEFAULT_TOL};
use crate::parallel::{map_chunks, CHUNK};

/// `1 + 1/2 + ... + 1/k`.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|s| 1.0 / s as f64).sum()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Inputs of a tower Morse integral.
///
/// The base manifold and its grid are those of `theta_f`. The twist is the
/// one carried by `L_k = O(1) (x) pi^* O(H_k / (kr) F)`, `H_k` the harmonic number.
#[derive(Clone, Debug)]
pub struct GgProblem {
    pub vb: VBundleCurvature,
    pub theta_f: CurvatureField,
    pub sched: EpsilonSchedule,
    pub samples: usize,
    pub seed: u64,
    pub proposal: Proposal,
    /// Replace `<c u_s, u_s>` by `Tr c / r` in every sample.
    pub trace_model: bool,
    pub tol: f64,
    pub threads: Option<usize>,
}

impl GgProblem {
    pub fn new(vb: VBundleCurvature, theta_f: CurvatureField, sched: EpsilonSchedule, samples: usize, seed: u64) -> Self {
        GgProblem { vb, theta_f, sched, samples, seed, proposal: Proposal::Matched, trace_model: false, tol: DEFAULT_TOL, threads: None }
    }

    pub fn k(&self) -> usize {
        self.sched.k()
    }

    pub fn n(&self) -> usize {
        self.vb.n()
    }

    pub fn r(&self) -> usize {
        self.vb.r()
    }

    /// `n + kr - 1`, the dimension of `X_k^GG`.
    pub fn total_dim(&self) -> usize {
        self.n() + self.k() * self.r() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgResult {
    pub k: usize,
    pub n: usize,
    pub r: usize,
    /// Signed index integrals `int_{X_k(L_k, q)} (-1)^q Theta^{n+kr-1}`, `q = 0..=n+kr-1`.
    pub estimates: Vec<Estimate>,
    pub samples: usize,
    pub seed: u64,
    pub cells: usize,
    pub effective_sample_size: f64,
    /// Fraction of the sampled mass with a zero horizontal eigenvalue.
    pub degenerate_fraction: f64,
    /// The `O(eps)` remainder of the curvature is not modeled.
    pub remainder_dropped: bool,
}

#[derive(Clone)]
struct Chunk {
    moments: Vec<Moments>,
    weight: f64,
    weight_sq: f64,
    degenerate: f64,
    mass: f64,
}

/// Estimates every signed index integral of `(L_k, h)` on `X_k^GG` in one pass.
///
/// Vertical directions count as positive, so the index of a point is the
/// number of negative eigenvalues of the horizontal block
/// `-sum_s x_s/s <c(z) u_s, u_s> + H_k/(kr) Theta_F(z)`, and the signed top
/// power is `C(n+kr-1, n)` times its determinant times the fiber volume
/// form. All fiber samples are shared by all base cells.
pub fn gg_morse_spectrum(problem: &GgProblem) -> Result<GgResult> {
    let model = *problem.theta_f.model();
    let (k, n, r) = (problem.k(), problem.n(), problem.r());
    if model.dim() != n {
        return dimension(format!("bundle over an {n}-dimensional base with a twist on {}", model.kind()));
    }
    if problem.samples == 0 {
        return domain("need at least one fiber sample");
    }
    problem.vb.validate_on(&model)?;
    let sampler = FiberSampler::new(r, &problem.sched, problem.proposal, problem.seed)?;
    let cells = model.cells();
    let twist = harmonic(k) / (k * r) as f64;
    let base: Vec<(f64, Vec<Complex64>, HermitianForm)> = cells
        .iter()
        .map(|c| (c.volume, problem.vb.at(&c.point), problem.theta_f.at(&c.point).scale(twist)))
        .collect();
    let dim = problem.total_dim();
    let top = binomial(dim, n);
    let parts = map_chunks(problem.samples, CHUNK, problem.threads, |block, range| {
        let mut out = Chunk { moments: vec![Moments::default(); dim + 1], weight: 0.0, weight_sq: 0.0, degenerate: 0.0, mass: 0.0 };
        for draw in sampler.block(block, range) {
            let mut g = vec![0.0; dim + 1];
            if draw.weight > 0.0 {
                for (vol, c, f) in &base {
                    let gamma = horizontal_from_tensor(&problem.vb, c, &draw.sample, problem.trace_model).add(f);
                    out.mass += vol * draw.weight;
                    match relative_signature(&gamma, problem.tol).index() {
                        Some(q) => {
                            let det = gamma.determinant();
                            g[q] += vol * if q % 2 == 0 { det } else { -det };
                        }
                        None => out.degenerate += vol * draw.weight,
                    }
                }
            }
            for (m, gq) in out.moments.iter_mut().zip(&g) {
                m.push(top * draw.weight * gq);
            }
            out.weight += draw.weight;
            out.weight_sq += draw.weight * draw.weight;
        }
        out
    });
    let mut moments = vec![Moments::default(); dim + 1];
    let (mut w, mut w2, mut deg, mut mass) = (0.0, 0.0, 0.0, 0.0);
    for p in &parts {
        moments.iter_mut().zip(&p.moments).for_each(|(a, b)| a.merge(b));
        w += p.weight;
        w2 += p.weight_sq;
        deg += p.degenerate;
        mass += p.mass;
    }
    Ok(GgResult {
        k,
        n,
        r,
        estimates: moments.iter().map(Moments::estimate).collect(),
        samples: problem.samples,
        seed: problem.seed,
        cells: cells.len(),
        effective_sample_size: if w2 > 0.0 { w * w / w2 } else { 0.0 },
        degenerate_fraction: if mass > 0.0 { deg / mass } else { 0.0 },
        remainder_dropped: true,
    })
}

/// The `q`-index Morse integral of `L_k` on `X_k^GG`.
pub fn gg_morse_mc(problem: &GgProblem, q: usize) -> Result<Estimate> {
    if q > problem.total_dim() {
        return domain(format!("index {q} exceeds dim X_k^GG = {}", problem.total_dim()));
    }
    Ok(gg_morse_spectrum(problem)?.estimates[q])
}

/// Ratio of the sampled first-order tower integral to its closed form.
///
/// For `k = 1` the tower is the projectivized bundle, with fibers `P^{r-1}`
/// of volume 1, and under the trace model the horizontal form is exactly
/// `eta / r`; the signed integrals are then `C(n+r-1, n) r^{-n} I_q(eta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub kappa: Estimate,
    pub exact: f64,
}

pub fn calibrate_k1(problem: &GgProblem) -> Result<Calibration> {
    let mut first = problem.clone();
    first.sched = EpsilonSchedule::geometric(1)?;
    first.trace_model = true;
    let sampled = gg_morse_spectrum(&first)?;
    let eta = super::curvature::EtaForms::new(&problem.vb, &problem.theta_f)?.eta;
    let spectrum = morse_integrals_with(&eta, &MorseOptions { tol: problem.tol, threads: problem.threads, ..MorseOptions::default() });
    let (n, r) = (problem.n(), problem.r());
    let exact = binomial(n + r - 1, n) * (r as f64).powi(-(n as i32)) * spectrum.integrals.iter().sum::<f64>();
    if exact == 0.0 {
        return domain("eta has vanishing index integrals; nothing to calibrate against");
    }
    let value: f64 = sampled.estimates.iter().map(|e| e.value).sum();
    let stderr = sampled.estimates.iter().map(|e| e.stderr * e.stderr).sum::<f64>().sqrt();
    Ok(Calibration { kappa: Estimate { value: value / exact, stderr: stderr / exact.abs(), samples: problem.samples as u64 }, exact })
}

/// `(log k)^n / (n! (k!)^r) * I_q(eta)`.
pub fn rhs_coefficient(k: usize, n: usize, r: usize, spectrum: &MorseSpectrum, q: usize) -> f64 {
    (k as f64).ln().powi(n as i32) / (factorial(n) * factorial(k).powi(r as i32)) * spectrum.get(q as isize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// Jet differentials, with the spectrum of `eta`.
    JetDifferentials,
    /// Their duals, with the spectrum of `eta^*`.
    Duals,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetBounds {
    pub variant: BoundVariant,
    pub lower: f64,
    pub upper: f64,
    /// The relative `O(1/log k)` corrections are not quantified.
    pub error_term_unquantified: bool,
}

/// Dominant terms of the bounds on `h^q` of the (dual) jet differentials
/// twisted by `(m H_k/(kr)) F` and a rank `rho` sheaf:
/// `rho m^{n+kr-1}/(n+kr-1)! (log k)^n/(n!(k!)^r)` times `I_q` (upper)
/// or `I_q - I_{q-1} - I_{q+1}` (lower).
pub fn bound_5_11(variant: BoundVariant, q: usize, m: u64, k: usize, r: usize, rho: f64, spectrum: &MorseSpectrum) -> Result<JetBounds> {
    if k == 0 || r == 0 {
        return domain("k and r must be at least 1");
    }
    let n = spectrum.n();
    let d = n + k * r - 1;
    let factor = rho * (m as f64).powi(d as i32) / factorial(d) * (k as f64).ln().powi(n as i32) / (factorial(n) * factorial(k).powi(r as i32));
    let q = q as isize;
    Ok(JetBounds {
        variant,
        lower: factor * (spectrum.get(q) - spectrum.get(q - 1) - spectrum.get(q + 1)),
        upper: factor * spectrum.get(q),
        error_term_unquantified: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BignessCertificate {
    pub positive: bool,
    /// `I_0 - I_1`.
    pub margin: f64,
    /// `r m^n / n! (I_0 - I_1)` at the reference `m`.
    pub sections_lower_bound: f64,
    /// The form is positive on the whole grid: the higher index sets are empty.
    pub kahler_current_mode: bool,
}

/// Bigness from `I_0 - I_1 > 0`.
pub fn certify_bigness(spectrum: &MorseSpectrum, m_ref: u64, r: u64, n: usize) -> Result<BignessCertificate> {
    if spectrum.n() != n {
        return Err(Error::Dimension(format!("spectrum of a {}-dimensional base, expected {n}", spectrum.n())));
    }
    let margin = spectrum.get(0) - spectrum.get(1);
    Ok(BignessCertificate {
        positive: margin > 0.0,
        margin,
        sections_lower_bound: crate::morse::lower_bound_q(0, m_ref, r, spectrum),
        kahler_current_mode: spectrum.index_mass.first().is_some_and(|&m| (m - 1.0).abs() < 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::{morse_integrals, GridSpec, ModelKind, ModelManifold};
    use crate::scalar::{int, rational};
    use std::f64::consts::LN_2;

    fn p1(bands: usize) -> ModelManifold {
        ModelManifold::new(ModelKind::P1, GridSpec::new(bands, 1)).unwrap()
    }

    fn problem(vb: &str, f: &str, r: usize, k: usize, samples: usize) -> GgProblem {
        let m = p1(4);
        let vb = VBundleCurvature::scalar(CurvatureField::parse(m, vb).unwrap(), r).unwrap();
        GgProblem::new(vb, CurvatureField::parse(m, f).unwrap(), EpsilonSchedule::geometric(k).unwrap(), samples, 17)
    }

    #[test]
    fn flat_bundle_with_positive_twist() {
        let p = problem("0*w", "2*w", 1, 2, 2000);
        let res = gg_morse_spectrum(&p).unwrap();
        // C(2,1) * (1/2!) * (H_2/2 * 2) = 3/2
        assert!((res.estimates[0].value - 1.5).abs() < 1e-12);
        assert_eq!(res.estimates[1].value, 0.0);
        assert_eq!(res.estimates[2].value, 0.0);
        assert!(gg_morse_mc(&p, 3).is_err());
    }

    #[test]
    fn negative_bundle_matches_harmonic_mean() {
        // eta = w, so the horizontal form is sum_s x_s/s, of mean H_k/k
        let p = problem("-w", "0*w", 1, 3, 50_000);
        let e = gg_morse_mc(&p, 0).unwrap();
        let expect = 3.0 * harmonic(3) / 3.0 / 6.0;
        assert!(e.consistent_with(expect, 4.0, 0.0), "{e:?} vs {expect}");
    }

    #[test]
    fn k1_calibration_is_exact() {
        let p = problem("-w", "w", 2, 2, 1000);
        let c = calibrate_k1(&p).unwrap();
        assert!((c.kappa.value - 1.0).abs() < 1e-12, "{c:?}");
    }

    #[test]
    fn rhs_examples() {
        let s = MorseSpectrum::from_integrals(ModelKind::P1, vec![3.0, 0.0]);
        assert!((rhs_coefficient(2, 1, 1, &s, 0) - LN_2 / 2.0 * 3.0).abs() < 1e-15);
        assert!((rhs_coefficient(3, 1, 1, &s, 0) - 3f64.ln() / 6.0 * 3.0).abs() < 1e-15);
        assert_eq!(rhs_coefficient(3, 1, 1, &s, 1), 0.0);
    }

    #[test]
    fn bound_examples() {
        let s = MorseSpectrum::from_integrals(ModelKind::P1xP1, vec![1.0, 1.0, 1.0]);
        let b = bound_5_11(BoundVariant::JetDifferentials, 1, 6, 2, 1, 1.0, &s).unwrap();
        // 6^3/3! * (log 2)^2 / (2! 2!) = 9 (log 2)^2
        assert!((b.upper - 9.0 * LN_2 * LN_2).abs() < 1e-12);
        assert!(b.error_term_unquantified);
        let s = MorseSpectrum::from_integrals(ModelKind::P1, vec![2.0, 0.0]);
        let b = bound_5_11(BoundVariant::JetDifferentials, 0, 10, 3, 1, 1.0, &s).unwrap();
        assert_eq!(b.lower, b.upper);
        let pos = morse_integrals(&CurvatureField::parse(p1(16), "3*w").unwrap(), DEFAULT_TOL);
        for q in 1..=1 {
            assert_eq!(bound_5_11(BoundVariant::Duals, q, 7, 2, 2, 1.0, &pos).unwrap().upper, 0.0);
        }
    }

    #[test]
    fn certificates() {
        let grid = ModelManifold::new(ModelKind::P1xP1, GridSpec::new(8, 1)).unwrap();
        for (a, b) in [(1, 1), (2, 3)] {
            let s = morse_integrals(&CurvatureField::parse(grid, &format!("{a}*w1+{b}*w2")).unwrap(), DEFAULT_TOL);
            let c = certify_bigness(&s, 10, 1, 2).unwrap();
            assert!(c.positive && c.kahler_current_mode);
            assert!((c.margin - 2.0 * (a * b) as f64).abs() < 1e-9);
            let s = morse_integrals(&CurvatureField::parse(grid, &format!("{a}*w1-{b}*w2")).unwrap(), DEFAULT_TOL);
            let c = certify_bigness(&s, 10, 1, 2).unwrap();
            assert!(!c.positive && !c.kahler_current_mode);
        }
        let zero = MorseSpectrum::from_integrals(ModelKind::P1, vec![0.0, 0.0]);
        let c = certify_bigness(&zero, 1, 1, 1).unwrap();
        assert!(!c.positive && c.margin == 0.0);
        assert!(certify_bigness(&zero, 1, 1, 2).is_err());
    }

    #[test]
    fn schedule_must_be_valid() {
        assert!(EpsilonSchedule::new(vec![int(1), rational(2, 1)]).is_err());
    }
}
