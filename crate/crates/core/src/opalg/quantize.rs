//! τ-quantization of monomials and the Born-Jordan bracket rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::measure::{tau_moment, TauMeasure};
use super::poly::{commutator, normal_order, Letter, OperatorPoly, Word};
use super::scalar::{CRational, ExactScalar};
use super::symbol::PolySymbol;
use crate::error::{Error, Result};

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Σ_m C(r,m)·∫(1−τ)ᵐτ^{r−m}P(dτ)·p̂^{r−m} q̂ˢ p̂ᵐ in canonical order.
pub fn quantize_monomial(s: u32, r: u32, p: &TauMeasure) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for m in 0..=r {
        let w = BigRational::from_integer(binom(r, m)) * tau_moment(p, m, r);
        if w == BigRational::from_integer(BigInt::from(0)) {
            continue;
        }
        let word = Word::powers(&[(Letter::P, r - m), (Letter::Q, s), (Letter::P, m)]);
        out = out.add(&normal_order(&word).scale(&CRational::real(w)));
    }
    out
}

pub fn quantize_poly(f: &PolySymbol, p: &TauMeasure) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for ((s, r), c) in f.coeffs() {
        out = out.add(&quantize_monomial(s, r, p).scale(c));
    }
    out
}

/// (1/iħ)[q̂^{n+1}/(n+1), p̂^{r+1}/(r+1)]
pub fn bj_product_rule(n: u32, r: u32) -> Result<OperatorPoly> {
    let a = OperatorPoly::term(n + 1, 0, ExactScalar::constant(CRational::ratio(1, n as i64 + 1)));
    let b = OperatorPoly::term(0, r + 1, ExactScalar::constant(CRational::ratio(1, r as i64 + 1)));
    let c = commutator(&a, &b);
    let minus_i = CRational::neg_i_pow(1);
    let mut out = OperatorPoly::zero();
    for ((qa, pb), s) in c.terms() {
        let lowered = s.unshift(1).ok_or(Error::GradingViolation { a: qa, b: pb })?;
        out.add_term(qa, pb, &lowered.mul_c(&minus_i));
    }
    Ok(out)
}

/// The q-sandwich form (1/(n+1)) Σ_k q̂ᵏ p̂ʳ q̂^{n−k}, kept for comparison against the τ-integral definition.
pub fn bj_q_sandwich(n: u32, r: u32) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for k in 0..=n {
        out = out.add(&normal_order(&Word::powers(&[(Letter::Q, k), (Letter::P, r), (Letter::Q, n - k)])));
    }
    out.scale(&CRational::ratio(1, n as i64 + 1))
}
