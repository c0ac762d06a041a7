//! Spontaneous decay of a point dipole inside a planar stack of dispersive,
//! absorbing dielectrics.
//!
//! Frequencies are in units of a reference frequency ω₀, lengths in c/ω₀,
//! wavenumbers in ω₀/c and rates in units of the free-space rate Γ₀.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod emission;
pub mod error;
pub mod fresnel;
pub mod materials;
pub mod quadrature;
pub mod sommerfeld;
pub mod stack;
pub mod sweep;

pub use error::{Error, Result};
