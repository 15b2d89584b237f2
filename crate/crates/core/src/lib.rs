//! Evaluation toolkit for intrinsic image decomposition against measured
//! ground-truth albedo.
//!
//! The crate covers the full path from gray-card captures to a leaderboard:
//!
//! - [`imagecore`]: image buffers, sRGB / Adobe RGB / CIELAB conversion,
//!   CIEDE2000, Gaussian blur, polygon rasterization, largest inscribed
//!   rectangle, bilinear resampling and file I/O.
//! - [`dataset`]: the JSON manifest of scenes, measurements and
//!   annotations, and prediction-set indexes.
//! - [`measure`]: gray-card albedo measurement and ground-truth shading.
//! - [`metrics`]: WHDR, intensity si-MSE, chromaticity error, texture error,
//!   sparse shading si-MSE and the forward fine-tuning losses.
//! - [`perceptual`]: texture distance backends (built-in MS-SSIM and an
//!   external process protocol).
//! - [`ranking`]: pairwise relative improvement and leaderboards.
//! - [`synthkit`]: synthetic Lambertian scenes with exact ground truth.
//! - [`cli`]: the command implementations behind the `albedo-bench` binary.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod imagecore;
pub mod measure;
pub mod metrics;
pub mod perceptual;
pub mod ranking;
pub mod report;
pub mod synthkit;

pub use error::{Error, Result};
