//! Kernel constructions on a grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{Grid1D, WaveFunction};
use super::matrix::{circulant, multiplier_table, CMatrix, KernelMatrix};
use super::symbol::SymbolFunction;
use crate::classical::DEFAULT_GL_ORDER;
use crate::error::{Error, Result};
use crate::opalg::TauMeasure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelOptions {
    /// Keep only momenta with |p| ≤ cutoff; required for p-degree > 2.
    pub momentum_cutoff: Option<f64>,
    pub gl_order: usize,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { momentum_cutoff: None, gl_order: DEFAULT_GL_ORDER }
    }
}

impl KernelOptions {
    fn weight(&self, p: f64) -> f64 {
        match self.momentum_cutoff {
            Some(c) if p.abs() > c => 0.0,
            _ => 1.0,
        }
    }
}

fn check_degree(f: &SymbolFunction, opts: &KernelOptions) -> Result<()> {
    let degree = f.p_degree();
    if degree > 2 && opts.momentum_cutoff.is_none() {
        return Err(Error::PDegree { degree });
    }
    Ok(())
}

fn build(n: usize, entry: impl Fn(usize, usize) -> Complex64 + Sync) -> CMatrix {
    let rows: Vec<Vec<Complex64>> = (0..n).into_par_iter().map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    CMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// ⟨q_i| 𝒬_P(f) |q_j⟩·dq: entry (i,j) = Σₖ c̄ₖ(q_i, q_j)·(1/n)Σ_l p_lᵏ e^{2πi l(i−j)/n}.
pub fn kernel_matrix(f: &SymbolFunction, g: &Grid1D, p: &TauMeasure) -> Result<KernelMatrix> {
    kernel_matrix_with(f, g, p, &KernelOptions::default())
}

pub fn kernel_matrix_with(f: &SymbolFunction, g: &Grid1D, p: &TauMeasure, opts: &KernelOptions) -> Result<KernelMatrix> {
    check_degree(f, opts)?;
    let deg = f.p_degree();
    let tables: Vec<Vec<Complex64>> =
        (0..=deg).map(|k| multiplier_table(g, |pl| Complex64::new(opts.weight(pl) * pl.powi(k as i32), 0.0))).collect();
    let qs = g.positions();
    let n = g.n;
    let entries = build(n, |i, j| {
        let c = f.averaged_coeffs(qs[i], qs[j], p, opts.gl_order);
        let d = (i + n - j) % n;
        c.iter().take(deg + 1).enumerate().map(|(k, ck)| tables[k][d] * *ck).sum()
    });
    Ok(KernelMatrix { entries, grid: *g, symbol_id: f.id.clone(), measure_id: p.to_string() })
}

/// Fourier multiplier p²/2m.
pub fn kinetic_matrix(g: &Grid1D, m: f64) -> Result<KernelMatrix> {
    if !(m > 0.0) {
        return Err(Error::InvalidInput(format!("mass must be positive, got {m}")));
    }
    let t = multiplier_table(g, |p| Complex64::new(p * p / (2.0 * m), 0.0));
    Ok(KernelMatrix { entries: circulant(&t), grid: *g, symbol_id: format!("p^2/2m[m={m}]"), measure_id: "any".into() })
}

/// Real symmetric kinetic matrix (the imaginary parts of the circulant vanish identically).
pub fn kinetic_matrix_real(g: &Grid1D, m: f64) -> nalgebra::DMatrix<f64> {
    let t = multiplier_table(g, |p| Complex64::new(p * p / (2.0 * m), 0.0));
    let n = g.n;
    nalgebra::DMatrix::from_fn(n, n, |i, j| t[(i + n - j) % n].re)
}

/// Entry (i,j) = (1/n) Σ_l e^{i(p_l(q_i − q_j) − H̄(q_j, q_i, p_l)·dt)/ħ}.
pub fn short_time_kernel(h: &SymbolFunction, g: &Grid1D, dt: f64, p: &TauMeasure) -> Result<KernelMatrix> {
    short_time_kernel_with(h, g, dt, p, &KernelOptions::default())
}

pub fn short_time_kernel_with(h: &SymbolFunction, g: &Grid1D, dt: f64, p: &TauMeasure, opts: &KernelOptions) -> Result<KernelMatrix> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    check_degree(h, opts)?;
    let hbar = g.hbar;
    let n = g.n;
    let entries = if let Some((m, v)) = h.separable() {
        // H̄ = p²/2m + V̄: the p-sum factorizes into a circulant times a phase.
        let free = multiplier_table(g, |pl| Complex64::from_polar(opts.weight(pl), -pl * pl * dt / (2.0 * m * hbar)));
        build(n, |i, j| {
            let vbar = v.periodic_average(g, j, i, p, opts.gl_order);
            free[(i + n - j) % n] * Complex64::from_polar(1.0, -vbar * dt / hbar)
        })
    } else {
        let deg = h.p_degree();
        let ps: Vec<(f64, f64, i64)> = (0..n).map(|k| (g.p_bin(k), opts.weight(g.p_bin(k)), g.signed_index(k))).collect();
        build(n, |i, j| {
            let c = h.periodic_averaged_coeffs(g, j, i, p, opts.gl_order);
            let d = i as f64 - j as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(pl, w, l) in &ps {
                if w == 0.0 {
                    continue;
                }
                let hbar_val: f64 = c.iter().take(deg + 1).rev().fold(0.0, |a, ck| a * pl + ck);
                let phase = 2.0 * PI * l as f64 * d / n as f64 - hbar_val * dt / hbar;
                acc += Complex64::from_polar(w, phase);
            }
            acc / n as f64
        })
    };
    Ok(KernelMatrix { entries, grid: *g, symbol_id: format!("exp(-i dt H/hbar)[{}; dt={dt}]", h.id), measure_id: p.to_string() })
}

/// Generic kernel of a complex symbol σ(q_A, q_B, p): entry (i,j) = (1/n) Σ_l σ(q_j, q_i, p_l) e^{2πi l(i−j)/n}.
pub fn symbol_kernel(g: &Grid1D, sigma: impl Fn(f64, f64, f64) -> Complex64 + Sync) -> CMatrix {
    let qs = g.positions();
    let n = g.n;
    let ps: Vec<(f64, i64)> = (0..n).map(|k| (g.p_bin(k), g.signed_index(k))).collect();
    build(n, |i, j| {
        let d = i as f64 - j as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(pl, l) in &ps {
            acc += sigma(qs[j], qs[i], pl) * Complex64::from_polar(1.0, 2.0 * PI * l as f64 * d / n as f64);
        }
        acc / n as f64
    })
}

/// (Ĥψ)(q_i) = (1/n) Σ_j Σ_l H̄(q_j,q_i,p_l)·𝟙{|H̄| ≤ E}·e^{2πi l(i−j)/n} ψ(q_j)
pub fn apply_pseudodiff(h: &SymbolFunction, p: &TauMeasure, psi: &WaveFunction, e_cut: f64) -> Result<WaveFunction> {
    apply_pseudodiff_with(h, p, psi, e_cut, DEFAULT_GL_ORDER)
}

pub fn apply_pseudodiff_with(h: &SymbolFunction, p: &TauMeasure, psi: &WaveFunction, e_cut: f64, gl_order: usize) -> Result<WaveFunction> {
    let g = psi.grid;
    let n = g.n;
    let qs = g.positions();
    let deg = h.p_degree();
    let ps: Vec<f64> = (0..n).map(|k| g.p_bin(k)).collect();
    let phases: Vec<Complex64> = (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)).collect();
    let signed: Vec<usize> = (0..n).map(|k| g.signed_index(k).rem_euclid(n as i64) as usize).collect();
    let out: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if psi.samples[j] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let c = h.averaged_coeffs(qs[j], qs[i], p, gl_order);
                let d = (i + n - j) % n;
                let mut inner = Complex64::new(0.0, 0.0);
                for (k, &pl) in ps.iter().enumerate() {
                    let hb: f64 = c.iter().take(deg + 1).rev().fold(0.0, |a, ck| a * pl + ck);
                    if hb.abs() <= e_cut {
                        inner += phases[(signed[k] * d) % n] * hb;
                    }
                }
                acc += inner * psi.samples[j];
            }
            acc / n as f64
        })
        .collect();
    Ok(WaveFunction { grid: g, samples: out })
}
