//! Chernoff iteration of the quantized short-time symbol e^{−itH/nħ}.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::reference::Spectrum;
use crate::classical::{HamiltonianSpec, DEFAULT_GL_ORDER};
use crate::error::{Error, Result};
use crate::kernels::{apply, multiplier_table, CMatrix, Grid1D, WaveFunction};
use crate::opalg::TauMeasure;

/// One Chernoff factor: entry (i,j) = (1/n)Σ_l ∫ e^{−iδH((1−τ)q_j + τq_i, p_l)/ħ} P(dτ) e^{2πi l(i−j)/n}.
/// For H = p²/2m + V the p-dependence factorizes, leaving a circulant times the averaged phase.
pub fn chernoff_factor(h: &HamiltonianSpec, g: &Grid1D, delta: f64, p: &TauMeasure) -> Result<CMatrix> {
    if h.is_magnetic() {
        return Err(Error::MagneticUnsupported("the Chernoff factor is built for H = p^2/2m + V"));
    }
    let hbar = g.hbar;
    let m = h.mass;
    let n = g.n;
    let free = multiplier_table(g, |pl| Complex64::from_polar(1.0, -pl * pl * delta / (2.0 * m * hbar)));
    let nodes = p.nodes(DEFAULT_GL_ORDER);
    let qs = g.positions();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let a = qs[j];
                    let b = a + g.nearest_offset(i, j) as f64 * g.dq();
                    let w: Complex64 = nodes
                        .iter()
                        .map(|&(wt, t)| Complex64::from_polar(wt, -delta * h.v.v(g.wrap((1.0 - t) * a + t * b)) / hbar))
                        .sum();
                    free[(i + n - j) % n] * w
                })
                .collect()
        })
        .collect();
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernoffResult {
    #[serde(skip)]
    pub psi: WaveFunction,
    pub n: usize,
    pub t: f64,
    /// ‖F(t/n)ⁿψ − e^{−iĤt/ħ}ψ‖ (dq-weighted).
    pub error: f64,
    /// Largest |‖ψ_k‖ − ‖ψ‖| over the iteration.
    pub max_norm_drift: f64,
}

pub fn chernoff_iterate(h: &HamiltonianSpec, g: &Grid1D, t: f64, n: usize, p: &TauMeasure, psi: &WaveFunction) -> Result<ChernoffResult> {
    let spectrum = Spectrum::new(h, g)?;
    chernoff_iterate_with(&spectrum, h, t, n, p, psi)
}

/// As [`chernoff_iterate`], reusing a precomputed reference spectrum.
pub fn chernoff_iterate_with(spectrum: &Spectrum, h: &HamiltonianSpec, t: f64, n: usize, p: &TauMeasure, psi: &WaveFunction) -> Result<ChernoffResult> {
    if n == 0 {
        return Err(Error::InvalidInput("Chernoff iteration count must be at least 1".into()));
    }
    let g = spectrum.grid;
    if !g.same_as(&psi.grid) {
        return Err(Error::GridMismatch("wavefunction grid differs from spectrum grid".into()));
    }
    let f = chernoff_factor(h, &g, t / n as f64, p)?;
    let n0 = psi.norm();
    let mut cur = psi.clone();
    let mut drift: f64 = 0.0;
    for _ in 0..n {
        cur = apply(&f, &g, &cur)?;
        drift = drift.max((cur.norm() - n0).abs());
    }
    let exact = spectrum.evolve(psi, t)?;
    Ok(ChernoffResult { error: cur.distance(&exact), psi: cur, n, t, max_norm_drift: drift })
}
