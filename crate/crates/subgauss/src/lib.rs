//! Construction, classification and stress-testing of strictly subgaussian
//! probability distributions.
//!
//! A mean-zero random variable X is subgaussian when E exp(tX) <=
//! exp(sigma^2 t^2/2) for some proxy variance sigma^2, and *strictly*
//! subgaussian when the optimal proxy equals Var(X). This crate builds
//! candidate laws from three sources and then verifies them:
//!
//! - [`charfn`]: transforms with prescribed real zeros (Newman's class L),
//!   via the Gaussian-times-product factorization, with cumulant and
//!   moment-bound formulas;
//! - [`quartic`] / [`construct`]: the quartic family
//!   exp(-gamma t^2/2)(1 - alpha t^2 + beta t^4), its exact admissibility
//!   and strictness regions, and products realizing arbitrary zero sets
//!   inside the pi/8 cone;
//! - [`periodic`]: laws whose density relative to the Gaussian is periodic,
//!   built from trigonometric series and theta-function windows.
//!
//! Verification lives in [`verify`] (optimal proxy variance, separation
//!   constants, concavity tests) and [`renyi`] (Renyi divergences against
//!   the standard normal and an FFT convolution harness for normalized
//!   sums). The [`cli`] module binds everything into the `subgauss` binary.
//!
//! ## Quick start
//!
//! ```
//! use subgauss::charfn::class_l_from_real_zeros;
//! use subgauss::verify::{proxy_variance, DEFAULT_T_CAP};
//!
//! // The law with density x^2 phi(x): transform zeros at +-1, variance 3.
//! let (model, handle) = class_l_from_real_zeros(1.0, &[1.0])?;
//! assert_eq!(model.variance(), 3.0);
//!
//! // Strictly subgaussian: the optimal proxy variance equals the variance.
//! let proxy = proxy_variance(&handle, DEFAULT_T_CAP)?;
//! assert!((proxy.value - 3.0).abs() < 1e-6);
//! # Ok::<(), subgauss::Error>(())
//! ```

// Validation guards use the negated form `!(x > 0.0)` on purpose: it
// rejects NaN, which `x <= 0.0` silently admits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfn;
pub mod cli;
pub mod construct;
mod error;
mod fft;
pub mod fixtures;
pub mod grid;
pub mod numerics;
pub mod periodic;
pub mod quartic;
pub mod renyi;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use grid::GriddedDensity;
pub use transform::TransformHandle;
