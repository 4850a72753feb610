//! Liouville transformations of Sturm–Liouville problems, inverse
//! constructions that realize the generalized second Paine problem
//! `-v'' + k/(t+m)² v = λ v` in canonical form, and a Sturm-sequence
//! eigensolver to check that both forms share a spectrum.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.

// `!(x > 0.0)` is used on purpose so that NaN lands on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod error;
pub mod expr;
pub mod inverse;
pub mod liouville;
pub mod quad;
mod real;
pub mod slp;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{Expr, ExprError};
pub use real::Real;

pub type CanonicalSlp = slp::CanonicalSlp<f64>;
pub type SchrodingerSlp = slp::SchrodingerSlp<f64>;
pub type Spectrum = slp::Spectrum<f64>;
pub type PaineSpec = slp::PaineSpec<f64>;
pub type TransformMap = liouville::TransformMap<f64>;
pub type SymTridiag = eigen::SymTridiag<f64>;
pub type InverseResult = inverse::InverseResult<f64>;
