//! Simulation of a single-qubit quantum Otto engine built from linear
//! optics: the photon polarization is the working substance and a path
//! degree of freedom acts as the reservoir that dephases it.
//!
//! The crate is organized bottom-up:
//!
//! - [`quantum`]: density operators, channels, entropies and fidelity.
//! - [`optics`]: Jones matrices and the dephasing interferometer.
//! - [`thermo`]: thermal states, stroke energetics, entropy production.
//! - [`tomography`]: Stokes-parameter measurement and reconstruction.
//! - [`circuit`]: a text format for optical circuits.
//! - [`runner`]: full cycles, θ_V sweeps and reports.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod error;
pub mod optics;
pub mod quantum;
pub mod runner;
pub mod thermo;
pub mod tolerance;
pub mod tomography;

pub use error::{Error, Result};
