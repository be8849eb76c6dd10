//! Potential catalog, magnetic terms and segment averages.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::quadrature::GaussLegendre;

pub const DEFAULT_GL_ORDER: usize = 32;

/// Real polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, q: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    pub fn nth_derivative(&self, k: usize) -> Poly {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![0.0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// ∫₀¹ P((1−τ)a + τb) dτ via the segment moments (1/(k+1)) Σ_j aʲ b^{k−j}.
    pub fn segment_average(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for (k, c) in self.0.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let mut s = 0.0;
            for j in 0..=k {
                s += a.powi(j as i32) * b.powi((k - j) as i32);
            }
            total += c * s / (k as f64 + 1.0);
        }
        total
    }
}

/// A function of q that can be averaged along a segment.
pub trait SegmentFn {
    fn value(&self, q: f64) -> f64;
    /// Polynomial form, when available, enabling exact segment averages.
    fn polynomial(&self) -> Option<Poly> {
        None
    }
}

impl SegmentFn for Poly {
    fn value(&self, q: f64) -> f64 {
        self.eval(q)
    }
    fn polynomial(&self) -> Option<Poly> {
        Some(self.clone())
    }
}

/// Adapter for plain closures (always averaged by quadrature).
pub struct FnSegment<F>(pub F);

impl<F: Fn(f64) -> f64> SegmentFn for FnSegment<F> {
    fn value(&self, q: f64) -> f64 {
        (self.0)(q)
    }
}

/// ∫₀¹ f((1−τ)q_A + τq_B) dτ: exact for polynomials, Gauss-Legendre otherwise.
pub fn path_average(f: &dyn SegmentFn, q_a: f64, q_b: f64) -> f64 {
    path_average_with(f, q_a, q_b, DEFAULT_GL_ORDER)
}

pub fn path_average_with(f: &dyn SegmentFn, q_a: f64, q_b: f64, gl_order: usize) -> f64 {
    if let Some(p) = f.polynomial() {
        return p.segment_average(q_a, q_b);
    }
    if q_a == q_b {
        return f.value(q_a);
    }
    GaussLegendre::new(gl_order).integrate(|t| f.value((1.0 - t) * q_a + t * q_b))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Free,
    /// V = −F q
    Linear { force: f64 },
    /// V = m ω² q² / 2
    Harmonic { omega: f64, mass: f64 },
    /// V = λ q⁴
    Quartic { lambda: f64 },
    Polynomial(Poly),
    /// V = V₀ exp(−q² / 2w²)
    Gaussian { v0: f64, width: f64 },
}

impl Potential {
    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Self::Free => Some(Poly(vec![0.0])),
            Self::Linear { force } => Some(Poly(vec![0.0, -force])),
            Self::Harmonic { omega, mass } => Some(Poly(vec![0.0, 0.0, 0.5 * mass * omega * omega])),
            Self::Quartic { lambda } => Some(Poly(vec![0.0, 0.0, 0.0, 0.0, *lambda])),
            Self::Polynomial(p) => Some(p.clone()),
            Self::Gaussian { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_poly().is_some_and(|p| p.is_zero())
    }

    /// k-th derivative V⁽ᵏ⁾(q).
    pub fn derivative(&self, q: f64, k: usize) -> f64 {
        match self {
            Self::Gaussian { v0, width } => {
                // dᵏ/dqᵏ e^{−q²/2w²} = (−1/w)ᵏ Heₖ(q/w) e^{−q²/2w²}
                let x = q / width;
                let (mut h0, mut h1) = (1.0, x);
                let he = if k == 0 {
                    1.0
                } else {
                    for j in 1..k {
                        let h2 = x * h1 - j as f64 * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                    h1
                };
                v0 * (-1.0 / width).powi(k as i32) * he * (-0.5 * x * x).exp()
            }
            _ => self.as_poly().expect("polynomial variant").nth_derivative(k).eval(q),
        }
    }

    pub fn v(&self, q: f64) -> f64 {
        self.derivative(q, 0)
    }

    pub fn dv(&self, q: f64) -> f64 {
        self.derivative(q, 1)
    }

    pub fn d2v(&self, q: f64) -> f64 {
        self.derivative(q, 2)
    }

    /// Parses `free`, `linear:F=2.0`, `harmonic:omega=1.0`, `quartic:lambda=0.1`,
    /// `poly:1,0,0.5`, `gauss:V0=1,w=0.5`. `mass` fixes the harmonic prefactor.
    pub fn parse(s: &str, mass: f64) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::InvalidInput(format!("potential '{s}': {m}"));
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let kv = |name: &[&str]| -> Result<f64> {
            for item in args.split(',') {
                if let Some((k, v)) = item.split_once('=') {
                    if name.contains(&k.trim()) {
                        return v.trim().parse().map_err(|_| bad(&format!("bad value for {}", k.trim())));
                    }
                }
            }
            Err(bad(&format!("missing parameter {}", name[0])))
        };
        let check_keys = |allowed: &[&str]| -> Result<()> {
            for item in args.split(',').filter(|i| !i.trim().is_empty()) {
                let key = item.split_once('=').map(|(k, _)| k.trim()).ok_or_else(|| bad("expected key=value"))?;
                if !allowed.contains(&key) {
                    return Err(bad(&format!("unknown parameter {key}")));
                }
            }
            Ok(())
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "free" => {
                if !args.trim().is_empty() {
                    return Err(bad("free takes no parameters"));
                }
                Ok(Self::Free)
            }
            "linear" => {
                check_keys(&["F", "f"])?;
                Ok(Self::Linear { force: kv(&["F", "f"])? })
            }
            "harmonic" => {
                check_keys(&["omega", "w"])?;
                Ok(Self::Harmonic { omega: kv(&["omega", "w"])?, mass })
            }
            "quartic" => {
                check_keys(&["lambda"])?;
                Ok(Self::Quartic { lambda: kv(&["lambda"])? })
            }
            "poly" => Ok(Self::Polynomial(parse_coeff_list(args).map_err(|m| bad(&m))?)),
            "gauss" => {
                check_keys(&["V0", "v0", "w", "width"])?;
                let width = kv(&["w", "width"])?;
                if width <= 0.0 {
                    return Err(bad("width must be positive"));
                }
                Ok(Self::Gaussian { v0: kv(&["V0", "v0"])?, width })
            }
            _ => Err(bad("unknown potential kind")),
        }
    }
}

fn parse_coeff_list(args: &str) -> std::result::Result<Poly, String> {
    if args.trim().is_empty() {
        return Err("empty coefficient list".into());
    }
    args.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coefficient '{}'", c.trim())))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Poly)
}

fn fmt_coeffs(f: &mut fmt::Formatter<'_>, c: &[f64]) -> fmt::Result {
    for (i, v) in c.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Free => f.write_str("free"),
            Self::Linear { force } => write!(f, "linear:F={force}"),
            Self::Harmonic { omega, .. } => write!(f, "harmonic:omega={omega}"),
            Self::Quartic { lambda } => write!(f, "quartic:lambda={lambda}"),
            Self::Polynomial(p) => {
                f.write_str("poly:")?;
                fmt_coeffs(f, &p.0)
            }
            Self::Gaussian { v0, width } => write!(f, "gauss:V0={v0},w={width}"),
        }
    }
}

impl SegmentFn for Potential {
    fn value(&self, q: f64) -> f64 {
        self.v(q)
    }
    fn polynomial(&self) -> Option<Poly> {
        self.as_poly()
    }
}

/// Velocity-valued coefficient u₀(q) of the term u₀(q)p; polynomial only.
#[derive(Clone, Debug, PartialEq)]
pub struct MagneticTerm {
    pub poly: Poly,
}

impl MagneticTerm {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { poly: Poly(coeffs) }
    }

    pub fn derivative(&self, q: f64, k: usize) -> f64 {
        self.poly.nth_derivative(k).eval(q)
    }

    pub fn u0(&self, q: f64) -> f64 {
        self.poly.eval(q)
    }

    pub fn du0(&self, q: f64) -> f64 {
        self.derivative(q, 1)
    }

    pub fn d2u0(&self, q: f64) -> f64 {
        self.derivative(q, 2)
    }

    /// Parses `poly:0,0.3`, optionally prefixed by `u0=`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("u0=").unwrap_or(s).trim();
        let args = body
            .strip_prefix("poly:")
            .ok_or_else(|| Error::InvalidInput(format!("magnetic term '{s}': only poly:<coeffs> is supported")))?;
        parse_coeff_list(args)
            .map(|poly| Self { poly })
            .map_err(|m| Error::InvalidInput(format!("magnetic term '{s}': {m}")))
    }
}

impl fmt::Display for MagneticTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("poly:")?;
        fmt_coeffs(f, &self.poly.0)
    }
}

/// H = p²/2m + u₀(q)p + V(q) with constant m.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub mass: f64,
    pub u0: Option<MagneticTerm>,
    pub v: Potential,
}

impl HamiltonianSpec {
    pub fn new(mass: f64, v: Potential) -> Result<Self> {
        Self::with_magnetic(mass, None, v)
    }

    pub fn with_magnetic(mass: f64, u0: Option<MagneticTerm>, v: Potential) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        if let Potential::Harmonic { mass: hm, .. } = v {
            if hm != mass {
                return Err(Error::InvalidInput(format!("harmonic potential built for mass {hm}, Hamiltonian mass {mass}")));
            }
        }
        let u0 = u0.filter(|u| !u.poly.is_zero());
        Ok(Self { mass, u0, v })
    }

    pub fn is_magnetic(&self) -> bool {
        self.u0.is_some()
    }

    pub fn u0(&self, q: f64) -> f64 {
        self.u0.as_ref().map_or(0.0, |u| u.u0(q))
    }

    pub fn u0_derivative(&self, q: f64, k: usize) -> f64 {
        self.u0.as_ref().map_or(0.0, |u| u.derivative(q, k))
    }

    pub fn energy(&self, q: f64, p: f64) -> f64 {
        p * p / (2.0 * self.mass) + self.u0(q) * p + self.v.v(q)
    }
}
