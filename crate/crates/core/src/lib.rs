//! Semi-supervised DCGAN for device-free WiFi CSI fingerprint localization.
//!
//! The crate is organized bottom-up:
//!
//! - [`tensor`]: the small differentiable engine (dense, 1-D conv/deconv, heads, Adam).
//! - [`models`]: the generator and the shared-weight discriminator/classifier.
//! - [`trainer`]: the alternating C / D / G training loop and the supervised baseline.
//! - [`dataset`]: synthetic CSI fingerprints, normalization, labeled subsets, CSV I/O.
//! - [`experiments`]: evaluation, label-budget sweeps, fake-sample dumps, config files.

pub mod dataset;
pub mod error;
pub mod label;
pub mod experiments;
pub mod models;
pub mod rng;
pub mod tensor;
pub mod trainer;

pub use error::{Error, Result};
pub use label::ClassLabel;
