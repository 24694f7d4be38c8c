//! Noisy nonadaptive group testing for recovering a set of non-defective
//! ("healthy") items.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: problem dimensions, channel parameters, random test designs
//!   and the dilution/additive-noise outcome process.
//! - [`info`]: entropies, subset log-likelihoods, the mutual information
//!   `I^(j)` and the error-exponent function `E0(rho, j, n)` of the
//!   boolean-OR channel.
//! - [`decode`]: the complement-pick, likelihood-sort and multi-stage
//!   decoders.
//! - [`bounds`]: combinatorial factors, sufficient and necessary test counts
//!   and optimised error-probability bounds.
//! - [`experiments`]: the Monte Carlo harness, sweeps and table data.
//!
//! All information quantities are in nats.

pub mod bounds;
pub mod decode;
mod error;
pub mod experiments;
pub mod info;
pub mod model;
pub mod par;

pub use error::{Error, Result};
