//! Density dynamics of bursty protein expression.
//!
//! The model: protein concentration x decays deterministically at rate β
//! and receives exponentially distributed bursts (mean size 1/k) at Poisson
//! rate λ. The probability density P(t, x) obeys the integro-differential
//! master equation
//!
//! ```text
//! ∂P/∂t = ∂/∂x (β x P) + λ (k ∫₀ˣ P(t,z) e^{-k(x-z)} dz − P)
//! ```
//!
//! with lim_{x→0} xP = 0. This crate evaluates the problem four independent
//! ways and cross-checks them against each other:
//!
//! * [`green`]: the exact kernel of the equation: a decaying atom plus a
//!   convergent series for the regular part (finite sum when λ/β ∈ ℕ), the
//!   stationary gamma density, and closed-form CDFs;
//! * [`cauchy`]: solutions for general initial densities by convolution
//!   with the kernel, with moments, CDFs and fully explicit closed forms
//!   for gamma-type initial data;
//! * [`laplace`]: numerical inversion of the exact Laplace-domain solution
//!   on a Talbot-type contour, an independent oracle for the series;
//! * [`mc`]: exact event-driven Monte Carlo of the underlying process;
//! * [`pde`]: a characteristics-aware upwind scheme for the master
//!   equation with an O(N) integrating-factor convolution.
//!
//! [`validate`] bundles the cross-checks into pass/fail suites consumed by
//! the `kfburst` command-line tool.

// `!(x >= 0.0)` guards are deliberate: unlike `x < 0.0` they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cauchy;
pub mod error;
pub mod green;
pub mod init;
pub mod laplace;
pub mod mc;
pub mod params;
pub mod pde;
pub mod quad;
pub mod special;
pub mod validate;

pub use error::{Error, Result};
pub use params::{ModelParams, SeriesConfig};
