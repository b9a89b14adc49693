//! Detector-picture simulation of FLRW cosmology in a linear ion trap.
//!
//! The ion chain's axial normal modes play the role of a massless field in
//! conformal time. A laser-driven ion acts as a two-level detector whose gap
//! and coupling window are modulated so that the lab clock ticks conformal
//! time. This crate computes the normal modes, the conformal-time maps and
//! schedules, and the leading-order excitation probability of the detector,
//! together with the closed-form de Sitter results used to check it.
//!
//! All quantities are dimensionless: frequencies are measured in units of the
//! axial trap frequency and times in its inverse. Physical units enter only in
//! [`ionchain::lamb_dicke`].
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod cosmo;
pub mod detector;
pub mod ionchain;
pub mod linalg;
pub mod numerics;
pub mod specfun;

mod error;

pub use error::Error;
pub use num_complex::Complex64;

/// Complex number used throughout the crate.
pub type ComplexValue = Complex64;
