//! Explicit constants for a log-free zero-density estimate
//! `N(sigma, T) <= C * T^(B (1 - sigma))` of the Riemann zeta function.
//!
//! Heights are carried as natural logarithms throughout, since the schedule
//! reaches `T = exp(6.7e12)`, far outside the range of `f64`.

// `!(a < b)` is used on purpose so that NaN inputs fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod compare;
pub mod detector;
mod error;
pub mod foundations;
pub mod optimizer;
pub mod pipeline;
pub mod quadrature;
pub mod zerocount;

pub use error::{Error, Result};
