//! Exact symbolic algebra for q̂, p̂ with [q̂, p̂] = iħ, ħ kept symbolic.

mod measure;
mod poly;
mod quantize;
mod scalar;
mod symbol;
mod text;

pub use measure::{cohen_multiplier, tau_moment, TauMeasure};
pub use poly::{adjoint, commutator, normal_order, op_mul, Letter, OperatorPoly, Word};
pub use quantize::{bj_product_rule, bj_q_sandwich, quantize_monomial, quantize_poly};
pub use scalar::{parse_rational, rational_to_f64, CRational, ExactScalar};
pub use symbol::{poisson_bracket, PolySymbol};
pub use text::{parse_operator_poly, parse_symbol, ParseError};
