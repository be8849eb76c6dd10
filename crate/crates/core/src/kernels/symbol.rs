//! Phase-space symbols H(q, p) = Σₖ cₖ(q) pᵏ with q-dependent coefficients.

use std::fmt;
use std::sync::Arc;

use crate::classical::{HamiltonianSpec, Poly, Potential};
use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::opalg::{rational_to_f64, PolySymbol, TauMeasure};

/// Coefficient function of one power of p.
#[derive(Clone)]
pub enum QFunction {
    Zero,
    Const(f64),
    Poly(Poly),
    Potential(Potential),
    Custom { label: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("Zero"),
            Self::Const(c) => write!(f, "Const({c})"),
            Self::Poly(p) => write!(f, "Poly({:?})", p.0),
            Self::Potential(v) => write!(f, "Potential({v})"),
            Self::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

impl QFunction {
    pub fn custom(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom { label: label.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, q: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Const(c) => *c,
            Self::Poly(p) => p.eval(q),
            Self::Potential(v) => v.v(q),
            Self::Custom { f, .. } => f(q),
        }
    }

    pub fn as_poly(&self) -> Option<Poly> {
        match self {
            Self::Zero => Some(Poly(vec![0.0])),
            Self::Const(c) => Some(Poly(vec![*c])),
            Self::Poly(p) => Some(p.clone()),
            Self::Potential(v) => v.as_poly(),
            Self::Custom { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_poly().is_some_and(|p| p.is_zero())
    }

    /// Value when the function is structurally constant.
    pub fn constant_value(&self) -> Option<f64> {
        let p = self.as_poly()?;
        if p.0.iter().skip(1).all(|&c| c == 0.0) {
            Some(p.0.first().copied().unwrap_or(0.0))
        } else {
            None
        }
    }

    /// ∫ c((1−τ)a + τb) P(dτ): exact segment moments for polynomial c under Uniform,
    /// atom evaluation for point masses and mixtures, Gauss-Legendre otherwise.
    pub fn average(&self, a: f64, b: f64, p: &TauMeasure, gl_order: usize) -> f64 {
        if let Some(c) = self.constant_value() {
            return c;
        }
        match (p, self.as_poly()) {
            (TauMeasure::Uniform, Some(poly)) => poly.segment_average(a, b),
            (TauMeasure::PointMass(t), _) => {
                let t = rational_to_f64(t);
                self.eval((1.0 - t) * a + t * b)
            }
            _ => p.nodes(gl_order).into_iter().map(|(w, t)| w * self.eval((1.0 - t) * a + t * b)).sum(),
        }
    }

    /// Average of the periodic extension of c along the shortest periodic segment from q_j to q_i.
    /// Segments that stay inside the box reduce to [`QFunction::average`]; segments crossing the
    /// seam are split there (Uniform) or have their atoms wrapped back into the box.
    pub fn periodic_average(&self, g: &Grid1D, j: usize, i: usize, p: &TauMeasure, gl_order: usize) -> f64 {
        let d = g.nearest_offset(i, j);
        let end = j as i64 + d;
        if (0..g.n as i64).contains(&end) {
            return self.average(g.q(j), g.q(i), p, gl_order);
        }
        if let Some(c) = self.constant_value() {
            return c;
        }
        let a = g.q(j);
        let b = a + d as f64 * g.dq();
        match (p, self.as_poly()) {
            (TauMeasure::Uniform, Some(_)) => {
                let (seam, other) = if d > 0 { (g.q_max, g.q_min) } else { (g.q_min, g.q_max) };
                let (l1, l2) = ((seam - a).abs(), (b - seam).abs());
                let mut acc = 0.0;
                if l1 > 0.0 {
                    acc += l1 * self.average(a, seam, p, gl_order);
                }
                if l2 > 0.0 {
                    acc += l2 * self.average(other, g.q(i), p, gl_order);
                }
                acc / (l1 + l2)
            }
            (TauMeasure::PointMass(t), _) => {
                let t = rational_to_f64(t);
                self.eval(g.wrap((1.0 - t) * a + t * b))
            }
            _ => p.nodes(gl_order).into_iter().map(|(w, t)| w * self.eval(g.wrap((1.0 - t) * a + t * b))).sum(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymbolFunction {
    pub id: String,
    /// coeffs[k] multiplies pᵏ.
    pub coeffs: Vec<QFunction>,
}

impl SymbolFunction {
    pub fn new(id: impl Into<String>, coeffs: Vec<QFunction>) -> Self {
        Self { id: id.into(), coeffs }
    }

    /// p²/2m + u₀(q)p + V(q)
    pub fn from_hamiltonian(h: &HamiltonianSpec) -> Self {
        let u0 = match &h.u0 {
            Some(u) => QFunction::Poly(u.poly.clone()),
            None => QFunction::Zero,
        };
        let id = match &h.u0 {
            Some(u) => format!("p^2/2m+u0 p+V[m={},u0={},V={}]", h.mass, u, h.v),
            None => format!("p^2/2m+V[m={},V={}]", h.mass, h.v),
        };
        Self::new(id, vec![QFunction::Potential(h.v.clone()), u0, QFunction::Const(0.5 / h.mass)])
    }

    /// V(q) alone.
    pub fn potential(v: Potential) -> Self {
        Self::new(format!("V[{v}]"), vec![QFunction::Potential(v)])
    }

    /// qˢpʳ
    pub fn monomial(s: u32, r: u32) -> Self {
        let mut coeffs = vec![QFunction::Zero; r as usize + 1];
        let mut c = vec![0.0; s as usize + 1];
        c[s as usize] = 1.0;
        coeffs[r as usize] = QFunction::Poly(Poly(c));
        Self::new(format!("q^{s}p^{r}"), coeffs)
    }

    /// φ(q)·p
    pub fn q_function_times_p(label: &str, phi: QFunction) -> Self {
        Self::new(format!("{label}*p"), vec![QFunction::Zero, phi])
    }

    /// p²/(2m(q)) + V(q)
    pub fn variable_mass(mass: impl Fn(f64) -> f64 + Send + Sync + 'static, v: Potential) -> Self {
        Self::new(
            format!("p^2/2m(q)+V[{v}]"),
            vec![QFunction::Potential(v), QFunction::Zero, QFunction::custom("1/2m(q)", move |q| 0.5 / mass(q))],
        )
    }

    pub fn from_poly_symbol(f: &PolySymbol) -> Result<Self> {
        if !f.is_real() {
            return Err(Error::InvalidInput("numeric kernels need a real symbol".into()));
        }
        let deg = f.p_degree() as usize;
        let mut polys = vec![Vec::<f64>::new(); deg + 1];
        for ((s, r), c) in f.coeffs() {
            let v = &mut polys[r as usize];
            if v.len() <= s as usize {
                v.resize(s as usize + 1, 0.0);
            }
            v[s as usize] += rational_to_f64(&c.re);
        }
        let coeffs = polys.into_iter().map(|p| if p.is_empty() { QFunction::Zero } else { QFunction::Poly(Poly(p)) }).collect();
        Ok(Self::new(f.to_string(), coeffs))
    }

    /// Highest power of p with a non-vanishing coefficient.
    pub fn p_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * p + c.eval(q))
    }

    /// Averaged coefficients c̄ₖ(q_A, q_B).
    pub fn averaged_coeffs(&self, q_a: f64, q_b: f64, p: &TauMeasure, gl_order: usize) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.average(q_a, q_b, p, gl_order)).collect()
    }

    /// Coefficients averaged along the shortest periodic segment from q_j to q_i.
    pub fn periodic_averaged_coeffs(&self, g: &Grid1D, j: usize, i: usize, p: &TauMeasure, gl_order: usize) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.periodic_average(g, j, i, p, gl_order)).collect()
    }

    /// (m, V) when H = p²/2m + V(q) with constant m > 0.
    pub fn separable(&self) -> Option<(f64, QFunction)> {
        if self.p_degree() != 2 || !self.coeffs[1].is_zero() {
            return None;
        }
        let c2 = self.coeffs[2].constant_value()?;
        if c2 <= 0.0 {
            return None;
        }
        Some((0.5 / c2, self.coeffs[0].clone()))
    }
}

/// H̄(q_A, q_B, p) = ∫ H((1−τ)q_A + τq_B, p) P(dτ)
pub fn average_symbol(h: &SymbolFunction, q_a: f64, q_b: f64, p: f64, measure: &TauMeasure) -> f64 {
    average_symbol_with(h, q_a, q_b, p, measure, crate::classical::DEFAULT_GL_ORDER)
}

pub fn average_symbol_with(h: &SymbolFunction, q_a: f64, q_b: f64, p: f64, measure: &TauMeasure, gl_order: usize) -> f64 {
    h.averaged_coeffs(q_a, q_b, measure, gl_order).iter().rev().fold(0.0, |acc, c| acc * p + c)
}
