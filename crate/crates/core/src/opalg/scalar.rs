//! Exact complex rationals and the ħ-graded scalar ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Complex number with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// (−i)ᵏ
    pub fn neg_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self { re: BigRational::zero(), im: -BigRational::one() },
            2 => Self::from_int(-1),
            _ => Self::i(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `n`, `n/d` or a finite decimal such as `0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_digits = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let int_part: BigInt = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            int_digits.parse().ok()?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().ok()? };
        let mut r = BigRational::new(int_part * &scale + frac_part, scale);
        if neg {
            r = -r;
        }
        return Some(r);
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for CRational {
    /// `n/d` when real, `n/di` when purely imaginary, `(n/d+n/di)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", fmt_rational(&self.im))
        } else {
            let sign = if self.im.is_negative() { "" } else { "+" };
            write!(f, "({}{}{}i)", fmt_rational(&self.re), sign, fmt_rational(&self.im))
        }
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, o: &CRational) -> CRational {
        CRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, o: &CRational) -> CRational {
        CRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, o: &CRational) -> CRational {
        CRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Σ_k c_k ħᵏ with exact complex rational c_k. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    terms: BTreeMap<u32, CRational>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: CRational) -> Self {
        Self::monomial(0, c)
    }

    /// c·ħᵏ
    pub fn monomial(k: u32, c: CRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn one() -> Self {
        Self::constant(CRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &CRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: u32) -> CRational {
        self.terms.get(&k).cloned().unwrap_or_else(CRational::zero)
    }

    pub fn min_grade(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn add_term(&mut self, k: u32, c: &CRational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&k) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, sum);
        }
    }

    pub fn add_assign(&mut self, o: &ExactScalar) {
        for (k, c) in o.terms() {
            self.add_term(k, c);
        }
    }

    pub fn mul_c(&self, c: &CRational) -> Self {
        let mut out = Self::zero();
        for (k, v) in self.terms() {
            out.add_term(k, &(v * c));
        }
        out
    }

    pub fn mul(&self, o: &ExactScalar) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in self.terms() {
            for (k2, c2) in o.terms() {
                out.add_term(k1 + k2, &(c1 * c2));
            }
        }
        out
    }

    /// Multiplies by ħ^shift.
    pub fn shift(&self, shift: u32) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k + shift, c.clone())).collect() }
    }

    /// Divides by ħ^shift; `None` if some term has grade below `shift`.
    pub fn unshift(&self, shift: u32) -> Option<Self> {
        if self.min_grade().is_some_and(|g| g < shift) {
            return None;
        }
        Some(Self { terms: self.terms.iter().map(|(k, c)| (k - shift, c.clone())).collect() })
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    /// Numeric value at a concrete ħ.
    pub fn eval(&self, hbar: f64) -> num_complex::Complex64 {
        self.terms()
            .map(|(k, c)| {
                let (re, im) = c.to_f64_pair();
                num_complex::Complex64::new(re, im) * hbar.powi(k as i32)
            })
            .sum()
    }
}
