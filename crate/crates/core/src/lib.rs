//! Hexagonal multicarrier transmission with a Gaussian prototype pulse over
//! non-stationary doubly dispersive channels, and the Max-SINR receive pulse.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod montecarlo;
pub mod quadrature;
pub mod search;
pub mod sinr;
pub mod special;
pub mod waveform;

pub use error::{Error, Result};
