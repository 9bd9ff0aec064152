//! Penner-type pseudo-Anosov maps on non-orientable surfaces.
//!
//! This crate builds an explicit family of filling curve systems on closed
//! non-orientable surfaces, forms the twist words acting on the span of the
//! curve measures, certifies the Perron-Frobenius eigenvalue of the
//! resulting non-negative integer matrices with exact rational bounds, and
//! verifies the spectral upper-bound chain together with orientation
//! double-cover invariance of the stretch factor.

#![forbid(unsafe_code)]

pub mod cover;
pub mod curvesys;
pub mod error;
pub mod family;
pub mod matrix;
pub mod penner;
pub mod spectra;
pub mod textio;

pub use matrix::IntMatrix;
