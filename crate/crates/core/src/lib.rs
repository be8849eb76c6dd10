//! Quantization rules, short-time classical actions and time-sliced propagators.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod kernels;
pub mod numeric;
pub mod opalg;
pub mod propagator;
pub mod report;

pub use error::{Error, Result};
