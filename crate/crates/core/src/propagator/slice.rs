//! One-slice short-time propagators and their compositions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::scheme::SliceScheme;
use crate::classical::{HamiltonianSpec, DEFAULT_GL_ORDER};
use crate::error::{Error, Result};
use crate::kernels::{low_momentum_unitarity_defect, matpow, multiplier_table, unitarity_defect, CMatrix, Grid1D, QFunction};

/// How the momentum integral of a slice is carried out on the grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceForm {
    /// Discrete momentum sum over the grid's conjugate momenta (alias-free).
    #[default]
    MomentumSum,
    /// Continuum Gaussian integral sampled at grid points.
    ClosedGaussian,
}

impl SliceForm {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "momentum_sum" | "momentum-sum" | "spectral" => Ok(Self::MomentumSum),
            "closed_gaussian" | "closed-gaussian" | "gaussian" => Ok(Self::ClosedGaussian),
            other => Err(Error::InvalidInput(format!("unknown slice form '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PropagatorMatrix {
    pub entries: CMatrix,
    pub grid: Grid1D,
    pub duration: f64,
    pub scheme: String,
    pub slices: usize,
}

impl PropagatorMatrix {
    /// ‖U†U − I‖₂ on the full grid space.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.entries)
    }

    /// ‖(U†U − I)Φ‖₂ with Φ the states of |p| below half the Nyquist momentum.
    pub fn low_momentum_unitarity_defect(&self) -> f64 {
        low_momentum_unitarity_defect(&self.entries, &self.grid)
    }
}

fn require_plain(h: &HamiltonianSpec) -> Result<()> {
    if h.is_magnetic() {
        return Err(Error::MagneticUnsupported("slice kernels are defined for H = p^2/2m + V"));
    }
    Ok(())
}

/// E_ij = e^{−i V̄(q_j, q_i) dt/ħ}. The momentum-sum kernel is circulant, so its potential
/// average runs along the shortest periodic segment; the closed form uses the literal segment.
fn potential_phase(h: &HamiltonianSpec, g: &Grid1D, dt: f64, scheme: &SliceScheme, i: usize, j: usize, periodic: bool) -> Complex64 {
    let v = QFunction::Potential(h.v.clone());
    let vbar = if periodic {
        v.periodic_average(g, j, i, &scheme.measure(), DEFAULT_GL_ORDER)
    } else {
        v.average(g.q(j), g.q(i), &scheme.measure(), DEFAULT_GL_ORDER)
    };
    Complex64::from_polar(1.0, -vbar * dt / g.hbar)
}

fn build(n: usize, entry: impl Fn(usize, usize) -> Complex64 + Sync) -> CMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n).into_par_iter().map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    CMatrix::from_fn(n, n, |i, j| rows[i][j])
}

pub fn slice_kernel(h: &HamiltonianSpec, g: &Grid1D, dt: f64, scheme: &SliceScheme) -> Result<PropagatorMatrix> {
    slice_kernel_with(h, g, dt, scheme, SliceForm::default())
}

pub fn slice_kernel_with(h: &HamiltonianSpec, g: &Grid1D, dt: f64, scheme: &SliceScheme, form: SliceForm) -> Result<PropagatorMatrix> {
    require_plain(h)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let n = g.n;
    let m = h.mass;
    let hbar = g.hbar;
    let entries = match form {
        SliceForm::MomentumSum => {
            let free = multiplier_table(g, |p| Complex64::from_polar(1.0, -p * p * dt / (2.0 * m * hbar)));
            build(n, |i, j| free[(i + n - j) % n] * potential_phase(h, g, dt, scheme, i, j, true))
        }
        SliceForm::ClosedGaussian => {
            // √(m/(2πiħ dt)) = √(m/(2πħ dt))·e^{−iπ/4}
            let pref = Complex64::from_polar((m / (2.0 * PI * hbar * dt)).sqrt() * g.dq(), -PI / 4.0);
            build(n, |i, j| {
                let d = g.q(i) - g.q(j);
                pref * Complex64::from_polar(1.0, m * d * d / (2.0 * hbar * dt)) * potential_phase(h, g, dt, scheme, i, j, false)
            })
        }
    };
    Ok(PropagatorMatrix { entries, grid: *g, duration: dt, scheme: scheme.to_string(), slices: 1 })
}

/// N-fold product of one slice (binary powering; all factors are equal).
pub fn compose_slices(h: &HamiltonianSpec, g: &Grid1D, t: f64, n: usize, scheme: &SliceScheme) -> Result<PropagatorMatrix> {
    compose_slices_with(h, g, t, n, scheme, SliceForm::default())
}

pub fn compose_slices_with(h: &HamiltonianSpec, g: &Grid1D, t: f64, n: usize, scheme: &SliceScheme, form: SliceForm) -> Result<PropagatorMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("slice count must be at least 1".into()));
    }
    let k = slice_kernel_with(h, g, t / n as f64, scheme, form)?;
    Ok(PropagatorMatrix { entries: matpow(&k.entries, n), grid: *g, duration: t, scheme: k.scheme, slices: n })
}
