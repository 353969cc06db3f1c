//! Numerics for the fractional Hardy inequality on convex sets.
//!
//! For an open convex set `K ≠ ℝᴺ`, `1 < p < ∞` and `0 < s < 1`, the inequality
//!
//! ```text
//!   C / (s (1 - s)) ∫_K |u|ᵖ / d_K^{sp} dx  ≤  ∬ |u(x) - u(y)|ᵖ / |x - y|^{N+sp} dx dy
//! ```
//!
//! holds with an explicit constant `C = C(N, p)`. This crate computes that
//! constant and every ingredient of it, evaluates the pointwise inequalities it
//! rests on, estimates the integrals on both sides for concrete test functions
//! and bodies, and assembles verification reports.
//!
//! The crate is `no_std` (it needs `alloc`). Parallel evaluation is plugged in
//! through [`Executor`]; the sequential executor ships here, threaded ones live
//! in the companion `hardy` crate.
#![no_std]
// `!(x < y)` is deliberate throughout: it rejects NaN along with the failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

// Float math comes from `num_traits::Float` (libm). When another crate in the
// graph links std, std's inherent methods win and the import reads as unused.
#[cfg(test)]
extern crate std;

pub mod constants;
pub mod error;
pub mod geometry;
pub mod math;
pub mod optimize;
pub mod pointwise;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, Params, Shape};
pub use quadrature::exec::{Executor, Sequential};
pub use quadrature::{IntegralEstimate, Method, QuadratureSpec, TestFunction};
