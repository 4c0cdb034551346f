//! Fluctuation theory for spectrally one-sided Lévy processes observed at
//! Poisson (or Erlang) inspection epochs up to an exponential killing time.
//!
//! The central identity is the decomposition of the killed running maximum
//! `Ȳ(T_β)` into the independent sum of the inspected maximum `Y_{β,ω}` and
//! `Ȳ(T_{β+ω})`. The crate evaluates the closed-form transforms on both sides,
//! inverts them to tail curves, simulates every quantity exactly, and derives
//! ruin/bankruptcy asymptotics for the Cramér–Lundberg model.

// `!(x > 0.0)` is used on purpose so that NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod inversion;
pub mod levy;
pub mod mc;
pub mod quadrature;
pub mod risk;
pub mod roots;
pub mod transforms;

pub use error::{Error, Result};
pub use levy::{JumpLaw, LevyModel, Orientation};
pub use roots::RootSolveConfig;
