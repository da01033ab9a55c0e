//! Exact and cavity Born-Oppenheimer (CBO) treatment of matter coupled to a
//! single cavity mode.
//!
//! Two model families are provided: a two-dimensional GaAs quantum ring and a
//! one-dimensional cavity Shin-Metiu molecule. All internal arithmetic is in
//! Hartree atomic units; conversion happens only at the config/output edges.

pub mod cbo;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod model;
pub mod quantity;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
