//! Stochastic-geometry analysis and system-level simulation of network MIMO
//! with user-centric and disjoint base-station clustering under zero-forcing
//! beamforming.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod gamma_approx;
pub mod geometry;
pub mod laplace;
pub mod montecarlo;
pub mod network;
pub mod propagation;
pub mod quadrature;
pub mod special;
pub mod stats;
pub mod zfbf;

pub use error::{Error, Result};
