//! Seeded Monte-Carlo primitives: sphere averages and the fiber sampler.
//!
//! Randomness comes from ChaCha8 keyed by the user seed, one stream per
//! block of [`CHUNK`] draws. Block `b` always yields the same draws, so
//! results do not depend on how blocks are spread over threads.

use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::metric::{slice_coordinates, FiberSample};
use super::schedule::EpsilonSchedule;
use crate::error::{dimension, domain, Result};
use crate::jet_algebra::JetPoint;
use crate::morse::HermitianForm;
use crate::parallel::{map_chunks, CHUNK};
use crate::scalar::factorial;

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, stderr: 0.0, samples: 0 }
    }

    /// `|value - target| <= sigmas * stderr + slack`.
    pub fn consistent_with(&self, target: f64, sigmas: f64, slack: f64) -> bool {
        (self.value - target).abs() <= sigmas * self.stderr + slack
    }

    pub fn scale(&self, c: f64) -> Self {
        Estimate { value: self.value * c, stderr: self.stderr * c.abs(), samples: self.samples }
    }
}

/// Running mean and centered second moment, mergeable in a fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let total = self.count + other.count;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / total as f64;
        self.m2 += other.m2 + d * d * (self.count as f64) * (other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn estimate(&self) -> Estimate {
        let var = if self.count > 1 { self.m2 / (self.count - 1) as f64 } else { 0.0 };
        Estimate { value: self.mean, stderr: (var.max(0.0) / self.count.max(1) as f64).sqrt(), samples: self.count }
    }
}

/// The generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Uniform point of the unit sphere of `C^r`.
pub fn random_unit_vector<R: Rng>(rng: &mut R, r: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> =
            (0..r).map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect();
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// `<A u, u>` for a unit vector `u`.
pub fn quadratic_value(a: &HermitianForm, u: &[Complex64]) -> f64 {
    let r = a.n();
    let mut acc = 0.0;
    for i in 0..r {
        for j in 0..r {
            acc += (u[i].conj() * a.get(i, j) * u[j]).re;
        }
    }
    acc
}

/// Average of `<A u, u>` over `samples` uniform unit vectors; converges to `Tr A / r`.
pub fn sphere_average(a: &HermitianForm, samples: usize, seed: u64) -> Result<Estimate> {
    sphere_average_with(a, samples, seed, None)
}

pub fn sphere_average_with(a: &HermitianForm, samples: usize, seed: u64, threads: Option<usize>) -> Result<Estimate> {
    if samples == 0 {
        return domain("sphere_average needs at least one sample");
    }
    let parts = map_chunks(samples, CHUNK, threads, |block, range| {
        let mut rng = block_rng(seed, block);
        let mut m = Moments::default();
        for _ in range {
            m.push(quadratic_value(a, &random_unit_vector(&mut rng, a.n())));
        }
        m
    });
    let mut total = Moments::default();
    parts.iter().for_each(|p| total.merge(p));
    Ok(total.estimate())
}

/// How the radii of the jet components are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposal {
    /// `eps_s |xi_s|^{2p/s} ~ Gamma(r)`: the slice coordinates follow the
    /// fiber measure exactly and every weight equals the fiber volume.
    #[default]
    Matched,
    /// `|xi_s|` with the radial law of the Lebesgue measure against
    /// `exp(-eps_s |xi_s|^{2p/s})`, i.e. `eps_s |xi_s|^{2p/s} ~ Gamma(rs/p)`,
    /// reweighted to the fiber measure.
    Importance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSample {
    pub sample: FiberSample,
    pub weight: f64,
}

/// Draws points of the fiber of `X_k^GG -> X` distributed according to
/// `omega_{p,FS}^{kr-1}`.
///
/// In slice coordinates `x` (on the simplex `sum x_s = 1`) and unit
/// directions `u_s`, that measure has total mass `1/(k!)^r` and is the
/// product of the Dirichlet law with all parameters `r` and the uniform
/// law on each sphere. Each draw builds a jet `xi` from rotation-invariant
/// components, maps it to `(x, u)` and carries the weight
/// `fiber volume * target density / proposal density`.
#[derive(Clone, Debug)]
pub struct FiberSampler {
    k: usize,
    r: usize,
    sched: EpsilonSchedule,
    proposal: Proposal,
    seed: u64,
    shapes: Vec<f64>,
    log_const: f64,
    fiber_volume: f64,
}

fn ln_dirichlet_norm(shapes: &[f64]) -> f64 {
    ln_gamma(shapes.iter().sum()) - shapes.iter().map(|&a| ln_gamma(a)).sum::<f64>()
}

impl FiberSampler {
    pub fn new(r: usize, sched: &EpsilonSchedule, proposal: Proposal, seed: u64) -> Result<Self> {
        if r == 0 {
            return dimension("rank must be at least 1");
        }
        let k = sched.k();
        let p = sched.p() as f64;
        let shapes: Vec<f64> = match proposal {
            Proposal::Matched => vec![r as f64; k],
            Proposal::Importance => (1..=k).map(|s| (r * s) as f64 / p).collect(),
        };
        let target = vec![r as f64; k];
        let log_const = ln_dirichlet_norm(&target) - ln_dirichlet_norm(&shapes);
        let fiber_volume = 1.0 / factorial::<f64>(k as u64).powi(r as i32);
        Ok(FiberSampler { k, r, sched: sched.clone(), proposal, seed, shapes, log_const, fiber_volume })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn proposal(&self) -> Proposal {
        self.proposal
    }

    /// `int omega_{p,FS}^{kr-1} = 1/(k!)^r`.
    pub fn fiber_volume(&self) -> f64 {
        self.fiber_volume
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> WeightedSample {
        let p = self.sched.p() as f64;
        let eps = self.sched.eps_f64();
        let mut xis = Vec::with_capacity(self.k);
        for (s, (&shape, e)) in self.shapes.iter().zip(eps).enumerate() {
            let t: f64 = Gamma::new(shape, 1.0).expect("positive shape").sample(rng);
            let radius = (t / e).powf((s + 1) as f64 / (2.0 * p));
            xis.push(random_unit_vector(rng, self.r).into_iter().map(|z| z * radius).collect());
        }
        let jet = JetPoint::new(vec![], xis).expect("well-formed jet");
        let sample = match slice_coordinates(&jet, &self.sched) {
            Ok(s) => s,
            // every radius underflowed; the point carries no mass
            Err(_) => {
                let u = random_unit_vector(rng, self.r);
                let sample = FiberSample { xs: vec![1.0 / self.k as f64; self.k], us: vec![u; self.k], degenerate: vec![true; self.k] };
                return WeightedSample { sample, weight: 0.0 };
            }
        };
        let weight = match self.proposal {
            Proposal::Matched => self.fiber_volume,
            Proposal::Importance => {
                let log_ratio: f64 = self
                    .shapes
                    .iter()
                    .zip(&sample.xs)
                    .map(|(a, x)| if *x > 0.0 { (self.r as f64 - a) * x.ln() } else { f64::NEG_INFINITY })
                    .sum();
                self.fiber_volume * (self.log_const + log_ratio).exp()
            }
        };
        WeightedSample { sample, weight }
    }

    /// The draws with indices in `range`, which must lie inside block `block`.
    pub fn block(&self, block: usize, range: Range<usize>) -> Vec<WeightedSample> {
        debug_assert!(range.start >= block * CHUNK && range.end <= (block + 1) * CHUNK);
        let mut rng = block_rng(self.seed, block);
        range.map(|_| self.draw(&mut rng)).collect()
    }

    /// The infinite stream of draws, block after block.
    pub fn stream(&self) -> impl Iterator<Item = WeightedSample> + '_ {
        (0..).flat_map(move |b| self.block(b, b * CHUNK..(b + 1) * CHUNK))
    }
}

/// `(sum w)^2 / sum w^2`.
pub fn effective_sample_size(weights: &[f64]) -> f64 {
    let s: f64 = weights.iter().sum();
    let s2: f64 = weights.iter().map(|w| w * w).sum();
    if s2 == 0.0 {
        0.0
    } else {
        s * s / s2
    }
}
