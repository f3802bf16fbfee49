//! Photon-pair joint amplitudes from dual-pump spontaneous four-wave mixing.
//!
//! The crate integrates the first-order evolution equation for the
//! biphoton joint temporal amplitude with a split-step scheme, evaluates
//! closed-form reference solutions, and reports Schmidt-mode purity.
//! See the `book/` directory for a guided tour.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod analytic;
pub mod cli;
pub mod error;
pub mod fluctuations;
pub mod grid;
pub(crate) mod io;
pub mod propagator;
pub mod pump;
pub mod quadrature;
pub mod schemes;
pub mod validation;

pub use error::{Error, Result};
pub use grid::{Domain, Grid2D, JointAmplitude};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/joint-amplitude.md")]
    mod joint_amplitude {}
    #[doc = include_str!("../../../book/src/split-step.md")]
    mod split_step {}
    #[doc = include_str!("../../../book/src/effects.md")]
    mod effects {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
