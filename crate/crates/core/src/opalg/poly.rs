//! Canonically ordered operator polynomials in q̂, p̂ and the rewriting engine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::scalar::{CRational, ExactScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Q,
    P,
}

/// A finite product of q̂ and p̂ in the written order. Empty means identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// Reads a string over {Q, P} (case-insensitive, whitespace ignored).
    pub fn parse(s: &str) -> Option<Self> {
        let mut letters = Vec::new();
        for c in s.chars() {
            match c {
                'q' | 'Q' => letters.push(Letter::Q),
                'p' | 'P' => letters.push(Letter::P),
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// q̂ᵃ as a word followed by p̂ᵇ etc.
    pub fn powers(parts: &[(Letter, u32)]) -> Word {
        let mut letters = Vec::new();
        for &(l, n) in parts {
            letters.extend(std::iter::repeat_n(l, n as usize));
        }
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::Q => "Q",
                Letter::P => "P",
            })?;
        }
        Ok(())
    }
}

/// Σ c_{a,b}(ħ) q̂ᵃ p̂ᵇ with every q̂ to the left of every p̂.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OperatorPoly {
    terms: BTreeMap<(u32, u32), ExactScalar>,
}

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(0, 0, ExactScalar::one())
    }

    pub fn q() -> Self {
        Self::term(1, 0, ExactScalar::one())
    }

    pub fn p() -> Self {
        Self::term(0, 1, ExactScalar::one())
    }

    /// c(ħ)·q̂ᵃp̂ᵇ
    pub fn term(a: u32, b: u32, c: ExactScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(a, b, &c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &ExactScalar)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coeff(&self, a: u32, b: u32) -> ExactScalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, o: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for ((a, b), c) in o.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, o: &OperatorPoly) -> OperatorPoly {
        self.add(&o.scale(&CRational::from_int(-1)))
    }

    pub fn scale(&self, c: &CRational) -> OperatorPoly {
        let mut out = Self::zero();
        for ((a, b), s) in self.terms() {
            out.add_term(a, b, &s.mul_c(c));
        }
        out
    }

    pub fn scale_scalar(&self, c: &ExactScalar) -> OperatorPoly {
        let mut out = Self::zero();
        for ((a, b), s) in self.terms() {
            out.add_term(a, b, &s.mul(c));
        }
        out
    }

    /// True when every term (a,b,k) satisfies a + b + 2k = d.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms().all(|((a, b), s)| s.terms().all(|(k, _)| a + b + 2 * k == d))
    }

    /// Numeric coefficients at a fixed ħ, keyed by (a,b).
    pub fn eval_hbar(&self, hbar: f64) -> BTreeMap<(u32, u32), num_complex::Complex64> {
        self.terms().map(|(ab, s)| (ab, s.eval(hbar))).collect()
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// p̂ᵇ q̂ᵃ = Σ_j C(b,j) C(a,j) j! (−iħ)ʲ q̂^{a−j} p̂^{b−j}
fn swap_powers(b: u32, a: u32) -> Vec<(u32, u32, u32, CRational)> {
    (0..=a.min(b))
        .map(|j| {
            let n = binom(b, j) * binom(a, j) * factorial(j);
            let c = CRational::neg_i_pow(j).scale(&BigRational::from_integer(n));
            (a - j, b - j, j, c)
        })
        .collect()
}

/// Associative product of canonically ordered polynomials.
pub fn op_mul(lhs: &OperatorPoly, rhs: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for ((a1, b1), s1) in lhs.terms() {
        for ((a2, b2), s2) in rhs.terms() {
            let s = s1.mul(s2);
            for (a, b, j, c) in swap_powers(b1, a2) {
                out.add_term(a1 + a, b + b2, &s.mul_c(&c).shift(j));
            }
        }
    }
    out
}

pub fn commutator(lhs: &OperatorPoly, rhs: &OperatorPoly) -> OperatorPoly {
    op_mul(lhs, rhs).sub(&op_mul(rhs, lhs))
}

/// Canonical form of a word under p̂q̂ = q̂p̂ − iħ.
pub fn normal_order(w: &Word) -> OperatorPoly {
    let mut acc = OperatorPoly::identity();
    // Collapse runs so that each multiplication handles a whole power at once.
    let mut i = 0;
    while i < w.letters.len() {
        let l = w.letters[i];
        let mut n = 0;
        while i < w.letters.len() && w.letters[i] == l {
            n += 1;
            i += 1;
        }
        let factor = match l {
            Letter::Q => OperatorPoly::term(n, 0, ExactScalar::one()),
            Letter::P => OperatorPoly::term(0, n, ExactScalar::one()),
        };
        acc = op_mul(&acc, &factor);
    }
    acc
}

/// Formal adjoint: conjugate coefficients and reverse each word q̂ᵃp̂ᵇ to p̂ᵇq̂ᵃ.
pub fn adjoint(a: &OperatorPoly) -> OperatorPoly {
    let mut out = OperatorPoly::zero();
    for ((qa, pb), s) in a.terms() {
        let reversed = op_mul(&OperatorPoly::term(0, pb, ExactScalar::one()), &OperatorPoly::term(qa, 0, ExactScalar::one()));
        out = out.add(&reversed.scale_scalar(&s.conj()));
    }
    out
}

impl fmt::Display for OperatorPoly {
    /// Terms `coeff * hbar^k * q^a * p^b` sorted by (a,b,k), joined by ` + `; zero-exponent factors omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((a, b), s) in self.terms() {
            for (k, c) in s.terms() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{c}")?;
                if k > 0 {
                    write!(f, " * hbar^{k}")?;
                }
                if a > 0 {
                    write!(f, " * q^{a}")?;
                }
                if b > 0 {
                    write!(f, " * p^{b}")?;
                }
            }
        }
        Ok(())
    }
}
