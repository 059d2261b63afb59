//! Exact combinatorics and calculus of k-jets.
//!
//! Everything here is generic over a [`Scalar`](crate::Scalar) ring and is
//! exact when that ring is [`BigRational`](num_rational::BigRational) or
//! [`ComplexRational`](crate::ComplexRational).

mod faa_di_bruno;
mod jets;
mod operator;
mod poly;
mod profiles;
mod tangent;

pub use faa_di_bruno::{faa_di_bruno, FaaDiBrunoTable};
pub use jets::{covariant_jet, push_jet, scale_jet, ChristoffelField, CurveTaylor, JetPoint, TruncatedMap};
pub use operator::{eval_operator, JetOperator};
pub use poly::{Poly, Series};
pub use profiles::{dim_gg, enumerate_profiles, ExponentProfile};
pub use tangent::{integrate_tangent_system, TangentMatrix};
