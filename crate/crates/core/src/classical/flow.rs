//! Hamilton flows, two-point shooting and the action functional.
//!
//! Paths are integrated in the reduced time τ = t/ε with the momentum split as
//! p = P + δp, where P is a fixed offset (m Δq/ε for boundary-value solves). The
//! large kinetic parts then never enter the floating-point state.

use crate::classical::potential::HamiltonianSpec;
use crate::error::{Error, Result};
use crate::numeric::quadrature::simpson;

pub const DEFAULT_BVP_STEPS: usize = 1024;
const MAX_NEWTON: usize = 60;
/// Normalized Jacobian (∂q_B/∂p_A)/(ε/m) below which the endpoint map is declared singular.
const CONJUGATE_THRESHOLD: f64 = 1e-6;

/// (q̇, ṗ) = (p/m + u₀(q), −u₀′(q)p − V′(q))
pub fn hamilton_rhs(h: &HamiltonianSpec, q: f64, p: f64) -> (f64, f64) {
    (p / h.mass + h.u0(q), -h.u0_derivative(q, 1) * p - h.v.dv(q))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhasePath {
    pub eps: f64,
    pub q_a: f64,
    pub q_b: f64,
    /// Constant momentum offset P; the momentum at sample i is `p_offset + dp[i]`.
    pub p_offset: f64,
    pub tau: Vec<f64>,
    pub q: Vec<f64>,
    pub dp: Vec<f64>,
    /// Shooting iterations used (0 for plain initial-value paths).
    pub iterations: usize,
    /// |q(ε) − q_B|
    pub residual: f64,
    /// Signed endpoint miss q(ε) − q_B, resolved below the roundoff of q (zero for IVP paths).
    pub miss: f64,
}

impl PhasePath {
    pub fn p(&self, i: usize) -> f64 {
        self.p_offset + self.dp[i]
    }

    pub fn p_a(&self) -> f64 {
        self.p(0)
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn q_end(&self) -> f64 {
        *self.q.last().expect("non-empty path")
    }
}

/// State (δq, δp, ξ, η) with q = q_A + τ·εP/m + δq: ξ = ∂q/∂δp_A and η = ∂δp/∂δp_A.
/// Carrying δq rather than q keeps the O(1) drift out of the accumulated sums, so the
/// endpoint miss is resolved far below the roundoff of q itself.
type State = [f64; 4];

struct Frame<'a> {
    h: &'a HamiltonianSpec,
    eps: f64,
    offset: f64,
    q0: f64,
    drift: f64,
}

impl Frame<'_> {
    fn q(&self, tau: f64, dq: f64) -> f64 {
        self.q0 + tau * self.drift + dq
    }

    fn rhs(&self, tau: f64, s: &State, variational: bool) -> State {
        let (h, eps) = (self.h, self.eps);
        let q = self.q(tau, s[0]);
        let dp = s[1];
        let m = h.mass;
        let p = self.offset + dp;
        let u0 = h.u0(q);
        let u1 = h.u0_derivative(q, 1);
        let ddq = eps * dp / m + eps * u0;
        let ddp = -u1 * (eps * p) - eps * h.v.dv(q);
        if !variational {
            return [ddq, ddp, 0.0, 0.0];
        }
        let (xi, eta) = (s[2], s[3]);
        let u2 = h.u0_derivative(q, 2);
        let dxi = eps * (eta / m + u1 * xi);
        let deta = -u2 * (eps * p) * xi - eps * u1 * eta - eps * h.v.d2v(q) * xi;
        [ddq, ddp, dxi, deta]
    }
}

struct Trajectory {
    q: Vec<f64>,
    dp: Vec<f64>,
    /// δq at τ = 1.
    dq_end: f64,
    drift: f64,
    xi: f64,
}

fn rk4_tau(h: &HamiltonianSpec, eps: f64, offset: f64, q0: f64, dp0: f64, n: usize, variational: bool) -> Result<Trajectory> {
    let frame = Frame { h, eps, offset, q0, drift: eps * offset / h.mass };
    let mut s: State = [0.0, dp0, 0.0, 1.0];
    let mut q = Vec::with_capacity(n + 1);
    let mut dp = Vec::with_capacity(n + 1);
    q.push(q0);
    dp.push(dp0);
    let hstep = 1.0 / n as f64;
    let add = |a: &State, k: &State, c: f64| -> State { [a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2], a[3] + c * k[3]] };
    for i in 0..n {
        let t = i as f64 * hstep;
        let k1 = frame.rhs(t, &s, variational);
        let k2 = frame.rhs(t + 0.5 * hstep, &add(&s, &k1, 0.5 * hstep), variational);
        let k3 = frame.rhs(t + 0.5 * hstep, &add(&s, &k2, 0.5 * hstep), variational);
        let k4 = frame.rhs(t + hstep, &add(&s, &k3, hstep), variational);
        for j in 0..4 {
            s[j] += hstep / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !s.iter().all(|v| v.is_finite()) {
            return Err(Error::Overflow { t: eps * (i + 1) as f64 * hstep });
        }
        q.push(frame.q((i + 1) as f64 * hstep, s[0]));
        dp.push(s[1]);
    }
    Ok(Trajectory { q, dp, dq_end: s[0], drift: frame.drift, xi: s[2] })
}

fn tau_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Classical RK4 with `n_steps` equal steps of size ε/n_steps.
pub fn integrate_ivp(h: &HamiltonianSpec, q_a: f64, p_a: f64, eps: f64, n_steps: usize) -> Result<PhasePath> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be non-negative, got {eps}")));
    }
    if n_steps == 0 || eps == 0.0 {
        return Ok(PhasePath {
            eps,
            q_a,
            q_b: q_a,
            p_offset: 0.0,
            tau: vec![0.0],
            q: vec![q_a],
            dp: vec![p_a],
            iterations: 0,
            residual: 0.0, miss: 0.0,
        });
    }
    let tr = rk4_tau(h, eps, 0.0, q_a, p_a, n_steps, false)?;
    let q_end = *tr.q.last().unwrap();
    Ok(PhasePath { eps, q_a, q_b: q_end, p_offset: 0.0, tau: tau_grid(n_steps), q: tr.q, dp: tr.dp, iterations: 0, residual: 0.0, miss: 0.0 })
}

#[derive(Clone, Copy, Debug)]
pub struct BvpOptions {
    pub tol: f64,
    /// Even number of RK4 steps in τ.
    pub n_steps: usize,
}

impl Default for BvpOptions {
    fn default() -> Self {
        Self { tol: 1e-12, n_steps: DEFAULT_BVP_STEPS }
    }
}

/// Secular guess for δp_A = p_A − mΔq/ε: π₀(0) + ε π₁(0).
fn initial_dp(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps: f64) -> f64 {
    let m = h.mass;
    let pi0 = -m * h.u0(q_a);
    if q_a == q_b {
        return pi0;
    }
    let delta = q_b - q_a;
    let veff = |q: f64| h.v.v(q) - 0.5 * m * h.u0(q).powi(2);
    let gl = crate::numeric::quadrature::GaussLegendre::new(16);
    let vbar = gl.integrate(|t| veff((1.0 - t) * q_a + t * q_b));
    pi0 - eps * (veff(q_a) - vbar) / delta
}

/// Shooting on p_A with Newton steps from the variational flow.
pub fn solve_bvp(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps: f64, tol: f64) -> Result<PhasePath> {
    solve_bvp_with(h, q_a, q_b, eps, BvpOptions { tol, ..BvpOptions::default() })
}

pub fn solve_bvp_with(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps: f64, opts: BvpOptions) -> Result<PhasePath> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be positive, got {}", opts.tol)));
    }
    let n = opts.n_steps.max(16).next_multiple_of(2);
    let offset = h.mass * (q_b - q_a) / eps;
    let mut dp0 = initial_dp(h, q_a, q_b, eps);
    let scale = eps / h.mass;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_NEWTON {
        let tr = rk4_tau(h, eps, offset, q_a, dp0, n, true)?;
        // q(1) − q_B with the O(1) parts cancelled before δq is added
        let miss = (q_a + tr.drift - q_b) + tr.dq_end;
        residual = miss.abs();
        let jac = tr.xi / scale;
        if !(jac.abs() >= CONJUGATE_THRESHOLD) {
            return Err(Error::ConjugatePoint { jacobian: jac.abs() });
        }
        if residual <= opts.tol {
            return Ok(PhasePath { eps, q_a, q_b, p_offset: offset, tau: tau_grid(n), q: tr.q, dp: tr.dp, iterations: it, residual, miss });
        }
        dp0 -= miss / tr.xi;
    }
    Err(Error::NoConvergence { iterations: MAX_NEWTON, residual })
}

/// ∫(p dq − H dt) = ε∫₀¹(p²/2m − V(q)) dτ, evaluated with composite Simpson in
/// the split form εP²/2m + ε∫(Pδp/m + δp²/2m − V) dτ.
pub fn action_along(path: &PhasePath, h: &HamiltonianSpec) -> f64 {
    0.5 * path.eps * path.p_offset * path.p_offset / h.mass + action_excess(path, h)
}

/// The action minus εP²/2m (for shooting paths, S − m Δq²/2ε), free of that cancellation.
pub fn action_excess(path: &PhasePath, h: &HamiltonianSpec) -> f64 {
    let m = h.mass;
    let eps = path.eps;
    if path.len() < 2 {
        return 0.0;
    }
    let big = eps * path.p_offset / m;
    let integrand: Vec<f64> = (0..path.len())
        .map(|i| big * path.dp[i] + eps * path.dp[i] * path.dp[i] / (2.0 * m) - eps * h.v.v(path.q[i]))
        .collect();
    let hstep = 1.0 / (path.len() - 1) as f64;
    let k = integrand.len();
    let body = if k % 2 == 1 {
        simpson(&integrand, hstep)
    } else if k >= 4 {
        // Odd interval count: Simpson up to the last interval, four-point Adams-Moulton on it.
        simpson(&integrand[..k - 1], hstep)
            + hstep / 24.0 * (integrand[k - 4] - 5.0 * integrand[k - 3] + 19.0 * integrand[k - 2] + 9.0 * integrand[k - 1])
    } else {
        0.5 * hstep * (integrand[0] + integrand[1])
    };
    // ∂S/∂q_B = p_B: first-order correction for the residual shooting miss.
    body - path.p(path.len() - 1) * path.miss
}
