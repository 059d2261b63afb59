//! Index sets, Morse integrals and cohomology bounds on the model manifolds.

mod cohomology;
mod field;
mod hermitian;
mod integrals;
mod manifold;
mod singular;

pub use cohomology::{euler_characteristic, exact_cohomology, p1_line, p2_line};
pub use field::{CurvatureField, Sampler};
pub use hermitian::{relative_signature, signature, HermitianForm, Signature};
pub use integrals::{
    lower_bound_q, morse_integrals, morse_integrals_with, plain_integral, rr_estimate, sm_alternating, wm_bound,
    GridMeta, MorseOptions, MorseSpectrum, DEFAULT_DEGENERATE_THRESHOLD, DEFAULT_TOL,
};
pub use manifold::{Cell, GridPoint, GridSpec, ModelKind, ModelManifold};
pub use singular::{bounded_sections_p1, P1Point, QDivisorMetricP1};
