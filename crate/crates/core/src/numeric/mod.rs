//! Shared numerical building blocks.

pub mod chebyshev;
pub mod lsq;
pub mod quadrature;
