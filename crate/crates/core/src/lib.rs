//! Two-mode Gaussian entanglement of squeezed optical beams: state modelling,
//! inseparability and EPR criteria, photon-number accounting, protocol
//! figures of merit, and frequency-spectrum processing.
//!
//! Variances are linear and normalized so that the vacuum has variance 1.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anchors;
pub mod epr;
pub mod error;
pub mod gaussian;
pub mod numeric;
pub mod photon_number;
pub mod protocols;
pub mod separability;
pub mod spectra;

pub use error::{Error, Result};
