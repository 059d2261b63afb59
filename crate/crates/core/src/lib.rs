//! Holomorphic Morse inequalities on jet towers, at finite scale.
//!
//! - [`jet_algebra`]: exact jets, weighted profiles, Faà di Bruno tables;
//! - [`morse`]: index integrals of curvature forms on model manifolds and
//!   the cohomology bounds built from them;
//! - [`ideal`]: integral closures of monomial ideals;
//! - [`tower`]: Monte-Carlo index integrals on the Green-Griffiths tower.
//!
//! ```
//! use jetmorse::morse::{morse_integrals, CurvatureField, GridSpec, ModelKind, ModelManifold, DEFAULT_TOL};
//!
//! let model = ModelManifold::new(ModelKind::P1, GridSpec::new(32, 1)).unwrap();
//! let s = morse_integrals(&CurvatureField::parse(model, "3*w").unwrap(), DEFAULT_TOL);
//! assert!((s.integrals[0] - 3.0).abs() < 1e-9);
//! ```

pub mod error;
pub mod ideal;
pub mod jet_algebra;
pub mod morse;
pub mod parallel;
pub mod scalar;
pub mod tower;

pub use error::{Error, Result};
pub use scalar::{ComplexRational, Scalar};

// The guide's snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/jets.md")]
    mod jets {}
    #[doc = include_str!("../../../book/src/morse.md")]
    mod morse {}
    #[doc = include_str!("../../../book/src/singular.md")]
    mod singular {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    mod ideals {}
    #[doc = include_str!("../../../book/src/tower.md")]
    mod tower {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
}
