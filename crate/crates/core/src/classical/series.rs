//! Short-time asymptotic series of the classical action.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::exact::harmonic_action_taylor;
use crate::classical::flow::{action_along, action_excess, solve_bvp_with, BvpOptions};
use crate::classical::potential::{path_average, FnSegment, HamiltonianSpec, Poly, Potential};
use crate::classical::secular::secular_profiles;
use crate::error::{Error, Result};
use crate::numeric::lsq::lstsq;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionSeries {
    pub c_minus1: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Not provided by the magnetic expansion.
    pub c3: Option<f64>,
    pub c5: Option<f64>,
    /// Formula route per coefficient.
    pub provenance: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C5Route {
    /// (avg(VF) − V̄·F̄)/(mΔq²)
    PrintedClosedForm,
    /// +(1/m)∫π₁π₃
    PrintedIntegral,
    /// −(1/2m)∫π₁π₃
    IntegrationByParts,
}

impl C5Route {
    pub const ALL: [C5Route; 3] = [Self::PrintedClosedForm, Self::PrintedIntegral, Self::IntegrationByParts];

    pub fn label(self) -> &'static str {
        match self {
            Self::PrintedClosedForm => "printed_closed_form",
            Self::PrintedIntegral => "printed_integral",
            Self::IntegrationByParts => "integration_by_parts",
        }
    }
}

/// The route whose value reproduces the ε⁵ Taylor coefficient of the exact
/// oscillator action; pinned by [`adjudicate_c5`] in the test suite.
pub const DESIGNATED_C5_ROUTE: C5Route = C5Route::IntegrationByParts;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C5Candidates {
    pub printed_closed_form: f64,
    pub printed_integral: f64,
    pub integration_by_parts: f64,
}

impl C5Candidates {
    pub fn get(&self, route: C5Route) -> f64 {
        match route {
            C5Route::PrintedClosedForm => self.printed_closed_form,
            C5Route::PrintedIntegral => self.printed_integral,
            C5Route::IntegrationByParts => self.integration_by_parts,
        }
    }

    pub fn designated(&self) -> f64 {
        self.get(DESIGNATED_C5_ROUTE)
    }
}

pub fn action_series(h: &HamiltonianSpec, q_a: f64, q_b: f64) -> Result<ActionSeries> {
    if q_a == q_b {
        return Err(Error::DegenerateEndpoints(q_a));
    }
    let m = h.mass;
    let d = q_b - q_a;
    let mut prov = BTreeMap::new();
    let v = &h.v;
    let vbar = path_average(v, q_a, q_b);
    let avg2 = |f: &dyn Fn(f64) -> f64, poly: Option<Poly>| -> f64 {
        match poly {
            Some(p) => path_average(&p, q_a, q_b),
            None => path_average(&FnSegment(f), q_a, q_b),
        }
    };
    prov.insert("c_minus1".into(), "m*dq^2/2".into());
    match &h.u0 {
        None => {
            let vpoly = v.as_poly();
            let v2 = avg2(&|q| v.v(q).powi(2), vpoly.as_ref().map(|p| p.mul(p)));
            let c3 = -(v2 - vbar * vbar) / (2.0 * m * d * d);
            let c5 = c5_candidates(h, q_a, q_b)?.designated();
            prov.insert("c1".into(), "-avg(V)".into());
            prov.insert("c3".into(), "-(avg(V^2)-avg(V)^2)/(2m dq^2)".into());
            prov.insert("c5".into(), DESIGNATED_C5_ROUTE.label().into());
            prov.insert("c0".into(), "zero (no magnetic term)".into());
            prov.insert("c2".into(), "zero (no magnetic term)".into());
            Ok(ActionSeries { c_minus1: 0.5 * m * d * d, c0: 0.0, c1: -vbar, c2: 0.0, c3: Some(c3), c5: Some(c5), provenance: prov })
        }
        Some(u) => {
            let up = &u.poly;
            let vpoly = v.as_poly();
            let ubar = path_average(up, q_a, q_b);
            let u2 = path_average(&up.mul(up), q_a, q_b);
            let u3 = path_average(&up.mul(up).mul(up), q_a, q_b);
            let uv = avg2(&|q| up.eval(q) * v.v(q), vpoly.as_ref().map(|p| p.mul(up)));
            let c2 = -(m * u3 - uv - m * ubar * u2 + ubar * vbar) / d;
            prov.insert("c0".into(), "-m*dq*avg(u0)".into());
            prov.insert("c1".into(), "m/2*avg(u0^2)-avg(V)".into());
            prov.insert("c2".into(), "-(m*avg(u0^3)-avg(u0 V)-m*avg(u0)*avg(u0^2)+avg(u0)*avg(V))/dq".into());
            Ok(ActionSeries {
                c_minus1: 0.5 * m * d * d,
                c0: -m * d * ubar,
                c1: 0.5 * m * u2 - vbar,
                c2,
                c3: None,
                c5: None,
                provenance: prov,
            })
        }
    }
}

/// The three ε⁵ routes, evaluated with Clenshaw-Curtis quadrature on the secular profiles.
pub fn c5_candidates(h: &HamiltonianSpec, q_a: f64, q_b: f64) -> Result<C5Candidates> {
    if h.is_magnetic() {
        return Err(Error::MagneticUnsupported("c5 candidates are defined for u0 absent"));
    }
    let prof = secular_profiles(h, q_a, q_b)?;
    let m = h.mass;
    let d = q_b - q_a;
    let i13 = prof.pi(1).mul(prof.pi(3)).mean();
    let v = &h.v;
    let (vf, vbar, fbar) = match v.as_poly() {
        Some(p) => {
            let f = Poly(p.derivative().0.iter().map(|c| -c).collect());
            (path_average(&p.mul(&f), q_a, q_b), path_average(&p, q_a, q_b), path_average(&f, q_a, q_b))
        }
        None => (
            path_average(&FnSegment(|q| -v.v(q) * v.dv(q)), q_a, q_b),
            path_average(v, q_a, q_b),
            path_average(&FnSegment(|q| -v.dv(q)), q_a, q_b),
        ),
    };
    Ok(C5Candidates {
        printed_closed_form: (vf - vbar * fbar) / (m * d * d),
        printed_integral: i13 / m,
        integration_by_parts: -i13 / (2.0 * m),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct C5Adjudication {
    pub oracle: f64,
    pub candidates: C5Candidates,
    pub rel_dev: BTreeMap<String, f64>,
    /// Routes within 1e−6 relative of the oracle.
    pub matching: Vec<C5Route>,
}

/// Compares the c₅ routes against the oscillator's exact ε⁵ Taylor coefficient.
pub fn adjudicate_c5(mass: f64, omega: f64, q_a: f64, q_b: f64) -> Result<C5Adjudication> {
    let h = HamiltonianSpec::new(mass, Potential::Harmonic { omega, mass })?;
    let oracle = harmonic_action_taylor(mass, omega, q_a, q_b)[3];
    let candidates = c5_candidates(&h, q_a, q_b)?;
    let mut rel_dev = BTreeMap::new();
    let mut matching = Vec::new();
    for r in C5Route::ALL {
        let dev = ((candidates.get(r) - oracle) / oracle).abs();
        rel_dev.insert(r.label().to_string(), dev);
        if dev <= 1e-6 {
            matching.push(r);
        }
    }
    Ok(C5Adjudication { oracle, candidates, rel_dev, matching })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesBasis {
    /// {ε⁻¹, 1, ε, ε², ε³, ε⁴, ε⁵}
    Full,
    /// {ε⁻¹, ε, ε³, ε⁵, ε⁷}: for actions known to be odd in ε (u₀ absent).
    Odd,
}

impl SeriesBasis {
    pub fn powers(self) -> Vec<i32> {
        match self {
            Self::Full => vec![-1, 0, 1, 2, 3, 4, 5],
            Self::Odd => vec![-1, 1, 3, 5, 7],
        }
    }
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub basis: SeriesBasis,
    pub bvp: BvpOptions,
    /// Multiple of the coefficient standard error that defines the noise floor.
    pub floor_sigmas: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { basis: SeriesBasis::Full, bvp: BvpOptions { tol: 1e-13, n_steps: 2048 }, floor_sigmas: 5.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesFit {
    pub eps: Vec<f64>,
    pub s_numeric: Vec<f64>,
    pub powers: Vec<i32>,
    pub coeffs: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// |cₖ| at or below this is indistinguishable from zero.
    pub noise_floor: Vec<f64>,
    /// Residual norm of the ε-weighted excess rows.
    pub residual_norm: f64,
    pub condition: f64,
}

impl SeriesFit {
    pub fn coeff(&self, power: i32) -> Option<f64> {
        self.powers.iter().position(|&p| p == power).map(|i| self.coeffs[i])
    }

    pub fn floor(&self, power: i32) -> Option<f64> {
        self.powers.iter().position(|&p| p == power).map(|i| self.noise_floor[i])
    }

    pub fn at_noise_floor(&self, power: i32) -> bool {
        match (self.coeff(power), self.floor(power)) {
            (Some(c), Some(f)) => c.abs() <= f,
            _ => true,
        }
    }
}

/// `n` logarithmically spaced values in [lo, hi].
pub fn log_sweep(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Numerical action S(ε) from shooting plus quadrature.
pub fn numeric_action(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps: f64, bvp: BvpOptions) -> Result<f64> {
    let path = solve_bvp_with(h, q_a, q_b, eps, bvp)?;
    Ok(action_along(&path, h))
}

/// S(ε) − mΔq²/2ε, computed without forming S.
pub fn numeric_action_excess(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps: f64, bvp: BvpOptions) -> Result<f64> {
    let path = solve_bvp_with(h, q_a, q_b, eps, bvp)?;
    Ok(action_excess(&path, h))
}

pub fn fit_series_numeric(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps_list: &[f64]) -> Result<SeriesFit> {
    fit_series_numeric_with(h, q_a, q_b, eps_list, &FitOptions::default())
}

/// Least squares of S(ε) on the basis powers. The known kinetic term mΔq²/2ε is carried
/// separately: the fit runs on the excess with rows scaled by ε, and c₋₁ is reported
/// as mΔq²/2 plus its fitted correction. This is the same linear model without the
/// cancellation that would otherwise bury the high orders.
pub fn fit_series_numeric_with(h: &HamiltonianSpec, q_a: f64, q_b: f64, eps_list: &[f64], opts: &FitOptions) -> Result<SeriesFit> {
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let powers = opts.basis.powers();
    if eps.len() < 9.max(powers.len() + 2) {
        return Err(Error::InvalidInput(format!("need at least 9 distinct eps values, got {}", eps.len())));
    }
    if eps[0] <= 0.0 || eps[eps.len() - 1] / eps[0] < 10.0 {
        return Err(Error::InvalidInput("eps values must be positive and span at least one decade".into()));
    }
    let excess: Vec<f64> = eps.par_iter().map(|&e| numeric_action_excess(h, q_a, q_b, e, opts.bvp)).collect::<Result<_>>()?;
    let kinetic = 0.5 * h.mass * (q_b - q_a).powi(2);
    let s: Vec<f64> = eps.iter().zip(&excess).map(|(e, x)| kinetic / e + x).collect();
    let rows = eps.len();
    // Shooting leaves S with an absolute error ∝ p_B|δq| ∝ 1/ε, hence row weights ∝ ε.
    let a = DMatrix::from_fn(rows, powers.len(), |i, j| eps[i].powi(powers[j] + 1));
    let b = DVector::from_fn(rows, |i, _| excess[i] * eps[i]);
    let r = lstsq(&a, &b, 4.0 * f64::EPSILON);
    let mut coeffs = r.coeffs;
    if let Some(k) = powers.iter().position(|&p| p == -1) {
        coeffs[k] += kinetic;
    }
    let noise_floor = r.std_errors.iter().map(|se| opts.floor_sigmas * se).collect();
    Ok(SeriesFit {
        eps,
        s_numeric: s,
        powers,
        coeffs,
        std_errors: r.std_errors,
        noise_floor,
        residual_norm: r.residual_norm,
        condition: r.condition,
    })
}
