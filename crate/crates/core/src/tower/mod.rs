//! The Green-Griffiths jet tower `X_k^GG`: its tautological metric, polar
//! coordinates, curvature and Monte-Carlo Morse integrals.

mod curvature;
mod estimate;
mod metric;
mod sampling;
mod schedule;

pub use curvature::{taut_curvature, EtaForms, TautCurvature, TensorSampler, VBundleCurvature};
pub use estimate::{
    bound_5_11, calibrate_k1, certify_bigness, gg_morse_mc, gg_morse_spectrum, harmonic, rhs_coefficient, BignessCertificate,
    BoundVariant, Calibration, GgProblem, GgResult, JetBounds,
};
pub use metric::{polar_decompose, polar_reconstruct, slice_coordinates, taut_norm, taut_norm_pow_exact, FiberSample};
pub use sampling::{
    block_rng, effective_sample_size, quadratic_value, random_unit_vector, sphere_average, sphere_average_with, Estimate, FiberSampler,
    Moments, Proposal, WeightedSample,
};
pub use schedule::EpsilonSchedule;
