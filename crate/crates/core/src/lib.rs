//! Monte Carlo solution of the Dirichlet problem for the Dunkl Laplacian.
//!
//! The Dunkl process (generator ½Δ_k) is simulated as a diffusion with
//! reflection jumps; averaging boundary data over exit positions gives
//! `h(x) = E^x[f(X_τ)]`. Exact polynomial algebra and closed-form kernels
//! for the product group (Z₂)^d provide the reference values the
//! simulations are checked against.

// `!(a > b)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dirichlet;
pub mod domain;
pub mod dunkl_algebra;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod oracles;
pub mod poly;
pub mod process;
pub mod quadrature;
pub mod rng;
pub mod rootsys;
pub mod specialfns;
pub mod stats;
pub mod validation;

pub use error::{Error, Result};
