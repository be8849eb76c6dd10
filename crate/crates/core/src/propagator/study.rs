//! Trotter-limit convergence and fixed-Δq phase-scaling experiments.

use rayon::prelude::*;
use serde::Serialize;

use super::reference::Spectrum;
use super::scheme::SliceScheme;
use super::slice::{compose_slices_with, SliceForm};
use crate::classical::{action_excess, solve_bvp_with, BvpOptions, HamiltonianSpec, DEFAULT_GL_ORDER};
use crate::error::{Error, Result};
use crate::kernels::{low_momentum_image, sigma_max, Grid1D};

/// Least-squares slope of ln y against ln x.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub ci95: [f64; 2],
    pub points: usize,
}

/// Two-sided 97.5% Student-t quantiles for 1..=10 degrees of freedom.
const T975: [f64; 10] = [12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228];

pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<SlopeFit> {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let stderr = if n > 2 {
        let rss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
        (rss / (n - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    let t = if n > 2 { T975.get(n - 3).copied().unwrap_or(1.96) } else { 0.0 };
    Some(SlopeFit { slope, stderr, ci95: [slope - t * stderr, slope + t * stderr], points: n })
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeConvergence {
    pub scheme: String,
    pub n: Vec<usize>,
    pub distance: Vec<f64>,
    /// Slope of ln(distance) against ln N.
    pub rate: Option<SlopeFit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairConvergence {
    pub a: String,
    pub b: String,
    pub n: Vec<usize>,
    pub distance: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub duration: f64,
    pub form: SliceForm,
    pub schemes: Vec<SchemeConvergence>,
    pub pairwise: Vec<PairConvergence>,
}

impl ConvergenceReport {
    pub fn scheme(&self, name: &str) -> Option<&SchemeConvergence> {
        self.schemes.iter().find(|s| s.scheme == name)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&PairConvergence> {
        self.pairwise.iter().find(|p| (p.a == a && p.b == b) || (p.a == b && p.b == a))
    }
}

pub fn convergence_study(h: &HamiltonianSpec, g: &Grid1D, t: f64, schemes: &[SliceScheme], n_list: &[usize]) -> Result<ConvergenceReport> {
    convergence_study_with(h, g, t, schemes, n_list, SliceForm::default())
}

pub fn convergence_study_with(
    h: &HamiltonianSpec,
    g: &Grid1D,
    t: f64,
    schemes: &[SliceScheme],
    n_list: &[usize],
    form: SliceForm,
) -> Result<ConvergenceReport> {
    if n_list.len() < 4 {
        return Err(Error::InvalidInput(format!("convergence study needs at least 4 slice counts, got {}", n_list.len())));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) || n_list[0] == 0 {
        return Err(Error::InvalidInput("slice counts must be positive and strictly increasing".into()));
    }
    let reference = low_momentum_image(&Spectrum::new(h, g)?.propagator(t).entries, g);
    let tasks: Vec<(usize, usize)> = (0..schemes.len()).flat_map(|s| (0..n_list.len()).map(move |k| (s, k))).collect();
    let images = tasks
        .par_iter()
        .map(|&(s, k)| Ok(low_momentum_image(&compose_slices_with(h, g, t, n_list[k], &schemes[s], form)?.entries, g)))
        .collect::<Result<Vec<_>>>()?;
    let image = |s: usize, k: usize| &images[s * n_list.len() + k];
    let mut out_schemes = Vec::new();
    for (s, scheme) in schemes.iter().enumerate() {
        let distance: Vec<f64> = (0..n_list.len()).map(|k| sigma_max(&(image(s, k) - &reference))).collect();
        let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
        out_schemes.push(SchemeConvergence { scheme: scheme.to_string(), n: n_list.to_vec(), rate: loglog_slope(&ns, &distance), distance });
    }
    let mut pairwise = Vec::new();
    for a in 0..schemes.len() {
        for b in a + 1..schemes.len() {
            let distance = (0..n_list.len()).map(|k| sigma_max(&(image(a, k) - image(b, k)))).collect();
            pairwise.push(PairConvergence { a: schemes[a].to_string(), b: schemes[b].to_string(), n: n_list.to_vec(), distance });
        }
    }
    Ok(ConvergenceReport { duration: t, form, schemes: out_schemes, pairwise })
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeScaling {
    pub scheme: String,
    pub dt: Vec<f64>,
    pub phase_error: Vec<f64>,
    pub slope: Option<SlopeFit>,
    /// lim e(dt)/dt from the two smallest steps, eliminating an O(dt²) correction.
    pub leading_coefficient: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub q_a: f64,
    pub q_b: f64,
    pub delta_q: f64,
    pub hbar: f64,
    pub schemes: Vec<SchemeScaling>,
}

impl ScalingReport {
    pub fn scheme(&self, name: &str) -> Option<&SchemeScaling> {
        self.schemes.iter().find(|s| s.scheme == name)
    }
}

/// e(dt) = |(m Δq²/2dt − V̄_scheme dt) − S_cl|/ħ. The kinetic parts cancel
/// analytically, so the comparison uses the action beyond m Δq²/2dt directly.
pub fn short_time_phase_scaling(
    h: &HamiltonianSpec,
    q_a: f64,
    q_b: f64,
    dt_list: &[f64],
    schemes: &[SliceScheme],
    hbar: f64,
) -> Result<ScalingReport> {
    if h.is_magnetic() {
        return Err(Error::MagneticUnsupported("slice exponents are defined for H = p^2/2m + V"));
    }
    if q_a == q_b {
        return Err(Error::DegenerateEndpoints(q_a));
    }
    if dt_list.len() < 2 || dt_list.windows(2).any(|w| w[0] <= w[1]) || dt_list.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidInput("dt list must be positive and strictly decreasing".into()));
    }
    let opts = BvpOptions { tol: 1e-13, n_steps: 2048 };
    let excess: Vec<f64> = dt_list
        .par_iter()
        .map(|&dt| Ok(action_excess(&solve_bvp_with(h, q_a, q_b, dt, opts)?, h)))
        .collect::<Result<_>>()?;
    let v = crate::kernels::QFunction::Potential(h.v.clone());
    let mut out = Vec::new();
    for scheme in schemes {
        let vbar = v.average(q_a, q_b, &scheme.measure(), DEFAULT_GL_ORDER);
        let phase_error: Vec<f64> = dt_list.iter().zip(&excess).map(|(&dt, &ex)| (-vbar * dt - ex).abs() / hbar).collect();
        let k = dt_list.len();
        let (d1, d2) = (dt_list[k - 1], dt_list[k - 2]);
        let (r1, r2) = (phase_error[k - 1] / d1, phase_error[k - 2] / d2);
        let leading = (r1 * d2 * d2 - r2 * d1 * d1) / (d2 * d2 - d1 * d1);
        out.push(SchemeScaling {
            scheme: scheme.to_string(),
            slope: loglog_slope(dt_list, &phase_error),
            leading_coefficient: Some(leading),
            dt: dt_list.to_vec(),
            phase_error,
        });
    }
    Ok(ScalingReport { q_a, q_b, delta_q: q_b - q_a, hbar, schemes: out })
}
