//! Monomial ideals and the integral closures of their rational powers,
//! the local model of bounded pluricanonical sections.

mod lp;
mod monomial;

pub use monomial::{closure_power, euler_canonical_check, membership, BoundedCanonical, MonomialIdeal, RationalPower};
