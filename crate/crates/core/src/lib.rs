//! Simulation of a learning-to-forecast asset market and calibration tools
//! for detecting super-exponential, positive-feedback bubble growth.
//!
//! The pipeline is: ingest or simulate a price series ([`series`],
//! [`market`]), sweep the price- and return-anchoring regressions over every
//! calibration window ([`stats`], [`sweep`]), and label the bubble
//! ([`classify`]). [`growth`] iterates the generative maps directly.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod error;
pub mod growth;
pub mod market;
pub mod series;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
