//! Classical polynomial symbols Σ c_{s,r} qˢ pʳ.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::scalar::CRational;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolySymbol {
    coeffs: BTreeMap<(u32, u32), CRational>,
}

impl PolySymbol {
    pub fn zero() -> Self {
        Self::default()
    }

    /// c·qˢpʳ
    pub fn monomial(s: u32, r: u32, c: CRational) -> Self {
        let mut out = Self::zero();
        out.add(s, r, &c);
        out
    }

    pub fn add(&mut self, s: u32, r: u32, c: &CRational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&(s, r)) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&(s, r));
        } else {
            self.coeffs.insert((s, r), sum);
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = ((u32, u32), &CRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, s: u32, r: u32) -> CRational {
        self.coeffs.get(&(s, r)).cloned().unwrap_or_else(CRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(CRational::is_real)
    }

    pub fn p_degree(&self) -> u32 {
        self.coeffs.keys().map(|&(_, r)| r).max().unwrap_or(0)
    }

    pub fn mul(&self, o: &PolySymbol) -> PolySymbol {
        let mut out = Self::zero();
        for ((s1, r1), c1) in self.coeffs() {
            for ((s2, r2), c2) in o.coeffs() {
                out.add(s1 + s2, r1 + r2, &(c1 * c2));
            }
        }
        out
    }

    pub fn sub(&self, o: &PolySymbol) -> PolySymbol {
        let mut out = self.clone();
        for ((s, r), c) in o.coeffs() {
            out.add(s, r, &-c);
        }
        out
    }

    pub fn d_dq(&self) -> PolySymbol {
        let mut out = Self::zero();
        for ((s, r), c) in self.coeffs() {
            if s > 0 {
                out.add(s - 1, r, &c.scale(&BigRational::from_integer(BigInt::from(s))));
            }
        }
        out
    }

    pub fn d_dp(&self) -> PolySymbol {
        let mut out = Self::zero();
        for ((s, r), c) in self.coeffs() {
            if r > 0 {
                out.add(s, r - 1, &c.scale(&BigRational::from_integer(BigInt::from(r))));
            }
        }
        out
    }

    pub fn eval(&self, q: f64, p: f64) -> num_complex::Complex64 {
        self.coeffs()
            .map(|((s, r), c)| {
                let (re, im) = c.to_f64_pair();
                num_complex::Complex64::new(re, im) * q.powi(s as i32) * p.powi(r as i32)
            })
            .sum()
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((s, r), c)) in self.coeffs().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            if s > 0 {
                write!(f, " * q^{s}")?;
            }
            if r > 0 {
                write!(f, " * p^{r}")?;
            }
        }
        Ok(())
    }
}

/// ∂_q f ∂_p g − ∂_p f ∂_q g
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> PolySymbol {
    f.d_dq().mul(&g.d_dp()).sub(&f.d_dp().mul(&g.d_dq()))
}
