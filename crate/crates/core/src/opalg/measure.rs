//! Probability measures on [0, 1] that select a quantization rule.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{parse_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::numeric::quadrature::GaussLegendre;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TauMeasure {
    PointMass(BigRational),
    Uniform,
    /// (weight, τ) atoms.
    Mixture(Vec<(BigRational, BigRational)>),
}

fn in_unit(t: &BigRational) -> bool {
    !t.is_negative() && *t <= BigRational::one()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl TauMeasure {
    pub fn point_mass(tau: BigRational) -> Result<Self> {
        if !in_unit(&tau) {
            return Err(Error::InvalidMeasure(format!("atom {tau} outside [0,1]")));
        }
        Ok(Self::PointMass(tau))
    }

    pub fn mixture(atoms: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("empty mixture".into()));
        }
        let mut total = BigRational::zero();
        for (w, t) in &atoms {
            if !w.is_positive() {
                return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
            }
            if !in_unit(t) {
                return Err(Error::InvalidMeasure(format!("atom {t} outside [0,1]")));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(Self::Mixture(atoms))
    }

    pub fn weyl() -> Self {
        Self::PointMass(r(1, 2))
    }

    pub fn left() -> Self {
        Self::PointMass(BigRational::zero())
    }

    pub fn right() -> Self {
        Self::PointMass(BigRational::one())
    }

    /// τ ↦ 1 − τ
    pub fn reflect(&self) -> Self {
        let one = BigRational::one();
        match self {
            Self::PointMass(t) => Self::PointMass(&one - t),
            Self::Uniform => Self::Uniform,
            Self::Mixture(a) => Self::Mixture(a.iter().map(|(w, t)| (w.clone(), &one - t)).collect()),
        }
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        match self {
            Self::Mixture(a) => match self.reflect() {
                Self::Mixture(b) => merge_atoms(a.clone()) == merge_atoms(b),
                _ => unreachable!(),
            },
            other => *other == other.reflect(),
        }
    }

    pub fn first_moment(&self) -> BigRational {
        match self {
            Self::PointMass(t) => t.clone(),
            Self::Uniform => r(1, 2),
            Self::Mixture(a) => a.iter().map(|(w, t)| w * t).sum(),
        }
    }

    /// Weighted nodes (w, τ) for numeric averages: atoms exactly, Gauss-Legendre for Uniform.
    pub fn nodes(&self, gl_order: usize) -> Vec<(f64, f64)> {
        match self {
            Self::PointMass(t) => vec![(1.0, rational_to_f64(t))],
            Self::Uniform => GaussLegendre::new(gl_order).pairs().collect(),
            Self::Mixture(a) => a.iter().map(|(w, t)| (rational_to_f64(w), rational_to_f64(t))).collect(),
        }
    }

    /// Parses `uniform`/`bj`, `weyl`/`midpoint`, `left`, `right`, `tau:<q>`, `mix:<w>@<tau>,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::InvalidMeasure(format!("{m} in '{s}'"));
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "bj" | "born-jordan" => return Ok(Self::Uniform),
            "weyl" | "midpoint" => return Ok(Self::weyl()),
            "left" => return Ok(Self::left()),
            "right" => return Ok(Self::right()),
            _ => {}
        }
        if let Some(t) = s.strip_prefix("tau:") {
            return Self::point_mass(parse_rational(t).ok_or_else(|| bad("bad tau"))?);
        }
        if let Some(list) = s.strip_prefix("mix:") {
            let mut atoms = Vec::new();
            for item in list.split(',') {
                let (w, t) = item.split_once('@').ok_or_else(|| bad("expected weight@tau"))?;
                let w = parse_rational(w).ok_or_else(|| bad("bad weight"))?;
                let t = parse_rational(t).ok_or_else(|| bad("bad tau"))?;
                atoms.push((w, t));
            }
            return Self::mixture(atoms);
        }
        Err(bad("unknown measure"))
    }
}

/// Atoms as (τ, total weight), sorted by τ.
fn merge_atoms(atoms: Vec<(BigRational, BigRational)>) -> Vec<(BigRational, BigRational)> {
    let mut out: Vec<(BigRational, BigRational)> = Vec::new();
    let mut by_tau: Vec<(BigRational, BigRational)> = atoms.into_iter().map(|(w, t)| (t, w)).collect();
    by_tau.sort();
    for (t, w) in by_tau {
        match out.last_mut() {
            Some((lt, lw)) if *lt == t => *lw += w,
            _ => out.push((t, w)),
        }
    }
    out
}

impl fmt::Display for TauMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PointMass(t) => write!(f, "tau:{t}"),
            Self::Uniform => f.write_str("uniform"),
            Self::Mixture(a) => {
                f.write_str("mix:")?;
                for (i, (w, t)) in a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}@{t}")?;
                }
                Ok(())
            }
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// ∫ (1−τ)ᵐ τ^{r−m} P(dτ), exactly.
///
/// # Panics
/// If `m > r`.
pub fn tau_moment(p: &TauMeasure, m: u32, r: u32) -> BigRational {
    assert!(m <= r, "tau_moment requires m <= r (m={m}, r={r})");
    let atom = |t: &BigRational| -> BigRational {
        let one_minus = BigRational::one() - t;
        num_traits::pow(one_minus, m as usize) * num_traits::pow(t.clone(), (r - m) as usize)
    };
    match p {
        TauMeasure::PointMass(t) => atom(t),
        // Beta(m+1, r−m+1) = m!(r−m)!/(r+1)!
        TauMeasure::Uniform => BigRational::new(factorial(m) * factorial(r - m), factorial(r + 1)),
        TauMeasure::Mixture(a) => a.iter().map(|(w, t)| w * atom(t)).sum(),
    }
}

/// ∫ e^{−i(τ−1/2)u} P(dτ)
pub fn cohen_multiplier(p: &TauMeasure, u: f64) -> Complex64 {
    match p {
        TauMeasure::Uniform => {
            let x = 0.5 * u;
            if x.abs() < 1e-4 {
                let x2 = x * x;
                Complex64::new(1.0 - x2 / 6.0 + x2 * x2 / 120.0, 0.0)
            } else {
                Complex64::new(x.sin() / x, 0.0)
            }
        }
        _ => p
            .nodes(1)
            .into_iter()
            .map(|(w, t)| w * Complex64::new(0.0, -(t - 0.5) * u).exp())
            .sum(),
    }
}
