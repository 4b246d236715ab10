//! Linear-optical purification of mixed Gaussian squeezed states.
//!
//! Variances are in shot-noise units throughout (vacuum = 1). Photon numbers
//! are per single squeezed beam, per unit bandwidth and time.
//!
//! - [`gaussian`]: single-mode states, loss, beam-splitter taps, dB helpers
//! - [`purification`]: optimal bound and the feed-forward purifier
//! - [`sampling`]: Monte-Carlo cross-check of the feed-forward variances
//! - [`photon`]: photon budgets, Holevo and dense-coding capacities
//! - [`entanglement`]: two-mode covariance matrices and log-negativity
//! - [`cli`]: command-line front end writing CSV

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod gaussian;
pub mod photon;
pub mod purification;
pub mod sampling;

pub use error::{Error, Result};
pub use gaussian::{GaussianMode, TapResult};
pub use photon::{CapacityQuery, PhotonBudget};
pub use purification::{FeedForwardConfig, GaussianChannelGains, PurificationResult};
