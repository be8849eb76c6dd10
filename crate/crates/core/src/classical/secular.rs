//! Secular expansion of the two-point trajectory at fixed Δq as ε → 0.
//!
//! q̃ = q⃗ + Σ εⁿχₙ, p̃ = π₋₁/ε + Σ εⁿπₙ. Order by order Hamilton's equations give
//!   χ′ₙ₊₁ = πₙ/m + [u₀(q̃)]ₙ,
//!   π′ₙ   = −[u₀′(q̃)p̃]ₙ₋₁ − [V′(q̃)]ₙ₋₁,
//! with [f(q̃)]ₖ the εᵏ coefficient of f(q⃗ + Σ εʲχⱼ). The additive constant of πₙ is
//! fixed by χₙ₊₁(1) = 0, i.e. ∫(πₙ/m + [u₀]ₙ) dτ = 0. Profiles are Chebyshev
//! interpolants on [0, 1].

use crate::classical::potential::HamiltonianSpec;
use crate::error::{Error, Result};
use crate::numeric::chebyshev::Cheb;

pub const DEFAULT_CHEB_DEGREE: usize = 64;
/// Highest π order computed (π₀..π₃, χ₁..χ₄).
const ORDER: usize = 3;

#[derive(Clone, Debug)]
pub struct SecularProfile {
    pub q_a: f64,
    pub q_b: f64,
    pub mass: f64,
    pub pi_minus1: f64,
    /// π₀, π₁, π₂, π₃
    pub pi: Vec<Cheb>,
    /// χ₁, χ₂, χ₃, χ₄
    pub chi: Vec<Cheb>,
}

impl SecularProfile {
    pub fn pi(&self, n: usize) -> &Cheb {
        &self.pi[n]
    }

    pub fn chi(&self, n: usize) -> &Cheb {
        assert!(n >= 1, "chi index starts at 1");
        &self.chi[n - 1]
    }

    /// Names of profiles that vanish identically.
    pub fn vanishing(&self) -> Vec<&'static str> {
        const PI: [&str; 4] = ["pi0", "pi1", "pi2", "pi3"];
        const CHI: [&str; 4] = ["chi1", "chi2", "chi3", "chi4"];
        let zero = |c: &Cheb| c.values().iter().all(|&v| v == 0.0);
        let mut out = Vec::new();
        for (i, c) in self.pi.iter().enumerate() {
            if zero(c) {
                out.push(PI[i]);
            }
        }
        for (i, c) in self.chi.iter().enumerate() {
            if zero(c) {
                out.push(CHI[i]);
            }
        }
        out
    }

    /// q⃗(τ) + Σ_{n ≤ order} εⁿχₙ(τ)
    pub fn q_approx(&self, eps: f64, order: usize, tau: f64) -> f64 {
        let mut q = (1.0 - tau) * self.q_a + tau * self.q_b;
        for n in 1..=order.min(self.chi.len()) {
            q += eps.powi(n as i32) * self.chi(n).eval(tau);
        }
        q
    }

    /// Samples (τ, π₀, π₁, π₂, π₃, χ₂, χ₄) on a uniform grid of `n + 1` points.
    pub fn sampled(&self, n: usize) -> Vec<[f64; 7]> {
        let taus: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let cols: Vec<Vec<f64>> = [&self.pi[0], &self.pi[1], &self.pi[2], &self.pi[3], &self.chi[1], &self.chi[3]]
            .iter()
            .map(|c| c.eval_many(&taus))
            .collect();
        taus.iter().enumerate().map(|(i, &t)| [t, cols[0][i], cols[1][i], cols[2][i], cols[3][i], cols[4][i], cols[5][i]]).collect()
    }
}

/// εᵏ coefficients (k = 0..=kmax) of f(q₀ + δ(ε)), δ = Σ_{j≥1} dⱼ εʲ, given f⁽ᵏ⁾(q₀).
fn compose(derivs: &[f64], d: &[f64], kmax: usize) -> Vec<f64> {
    // d[j-1] is the εʲ coefficient of δ.
    let mut out = vec![0.0; kmax + 1];
    let mut power = vec![0.0; kmax + 1];
    power[0] = 1.0;
    let mut fact = 1.0;
    for (k, fk) in derivs.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
            let mut next = vec![0.0; kmax + 1];
            for i in 0..kmax {
                if power[i] == 0.0 {
                    continue;
                }
                for (j, dj) in d.iter().enumerate().take(kmax - i) {
                    next[i + j + 1] += power[i] * dj;
                }
            }
            power = next;
        }
        for n in 0..=kmax {
            out[n] += fk / fact * power[n];
        }
    }
    out
}

pub fn secular_profiles(h: &HamiltonianSpec, q_a: f64, q_b: f64) -> Result<SecularProfile> {
    secular_profiles_with(h, q_a, q_b, DEFAULT_CHEB_DEGREE)
}

pub fn secular_profiles_with(h: &HamiltonianSpec, q_a: f64, q_b: f64, degree: usize) -> Result<SecularProfile> {
    if q_a == q_b {
        return Err(Error::DegenerateEndpoints(q_a));
    }
    let m = h.mass;
    let delta = q_b - q_a;
    let nodes = crate::numeric::chebyshev::nodes(degree);
    let qlin: Vec<f64> = nodes.iter().map(|&t| (1.0 - t) * q_a + t * q_b).collect();
    let kmax = ORDER + 1;
    // Per-node derivative tables.
    let u0_d: Vec<Vec<f64>> = qlin.iter().map(|&q| (0..=kmax + 1).map(|k| h.u0_derivative(q, k)).collect()).collect();
    let v1_d: Vec<Vec<f64>> = qlin.iter().map(|&q| (1..=kmax + 1).map(|k| h.v.derivative(q, k)).collect()).collect();

    let pi_minus1 = m * delta;
    let mut pi: Vec<Cheb> = Vec::new();
    let mut chi: Vec<Cheb> = Vec::new();
    for n in 0..=ORDER {
        // χ₁..χₙ are known; expansions need orders up to n.
        let chi_at = |node: usize| -> Vec<f64> { chi.iter().map(|c| c.values()[node]).collect() };
        let mut dpi = vec![0.0; degree + 1];
        let mut u0_n = vec![0.0; degree + 1];
        for node in 0..=degree {
            let d = chi_at(node);
            let u0s = compose(&u0_d[node], &d, n);
            let u1s = compose(&u0_d[node][1..], &d, n);
            let vs = compose(&v1_d[node], &d, n);
            // [u₀′p̃]ₙ₋₁ = Σ_{j=0}^{n} [u₀′]ⱼ π_{n−1−j}
            let mut mag = 0.0;
            for (j, u1j) in u1s.iter().enumerate().take(n + 1) {
                let idx = n as isize - 1 - j as isize;
                let p = if idx == -1 { pi_minus1 } else { pi[idx as usize].values()[node] };
                mag += u1j * p;
            }
            let force = if n >= 1 { vs[n - 1] } else { 0.0 };
            dpi[node] = -mag - force;
            u0_n[node] = u0s[n];
        }
        let u0_n = Cheb::from_values(u0_n);
        let raw = Cheb::from_values(dpi).antiderivative();
        let c = -raw.mean() - m * u0_n.mean();
        let pin = raw.shift(c);
        let chin = pin.scale(1.0 / m).add(&u0_n).antiderivative();
        pi.push(pin);
        chi.push(chin);
    }
    Ok(SecularProfile { q_a, q_b, mass: m, pi_minus1, pi, chi })
}

/// The closed form −(V′(q⃗) − V̄′)/Δq printed for π₃; compared against the ODE route in reports.
pub fn pi3_printed(h: &HamiltonianSpec, q_a: f64, q_b: f64, tau: f64) -> f64 {
    let gl = crate::numeric::quadrature::GaussLegendre::new(32);
    let mean = gl.integrate(|t| h.v.dv((1.0 - t) * q_a + t * q_b));
    -(h.v.dv((1.0 - tau) * q_a + tau * q_b) - mean) / (q_b - q_a)
}

/// The oscillator χ₂ as printed: ½ω²q_A τ(1−τ²) + ⅙ω²q_B τ(1−τ³).
pub fn chi2_osc_printed(omega: f64, q_a: f64, q_b: f64, tau: f64) -> f64 {
    let w2 = omega * omega;
    0.5 * w2 * q_a * tau * (1.0 - tau * tau) + w2 / 6.0 * q_b * tau * (1.0 - tau.powi(3))
}

/// The oscillator χ₂ from the ε² expansion of the exact solution.
pub fn chi2_osc_derived(omega: f64, q_a: f64, q_b: f64, tau: f64) -> f64 {
    let w2 = omega * omega;
    0.5 * w2 * q_a * tau * (1.0 - tau) + w2 / 6.0 * (q_b - q_a) * tau * (1.0 - tau * tau)
}

/// Magnetic π₁ as printed: (m u₀(q⃗)² − V(q⃗) − m·avg(u₀²) + V̄)/Δq.
pub fn magnetic_pi1_printed(h: &HamiltonianSpec, q_a: f64, q_b: f64, tau: f64) -> f64 {
    let m = h.mass;
    let gl = crate::numeric::quadrature::GaussLegendre::new(32);
    let f = |q: f64| m * h.u0(q).powi(2) - h.v.v(q);
    let mean = gl.integrate(|t| f((1.0 - t) * q_a + t * q_b));
    (f((1.0 - tau) * q_a + tau * q_b) - mean) / (q_b - q_a)
}

/// Magnetic π₂ as printed: −m u₀′(q⃗).
pub fn magnetic_pi2_printed(h: &HamiltonianSpec, q_a: f64, q_b: f64, tau: f64) -> f64 {
    -h.mass * h.u0_derivative((1.0 - tau) * q_a + tau * q_b, 1)
}
