//! Column-scaled least squares with coefficient standard errors.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct LstsqResult {
    pub coeffs: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residual_norm: f64,
    /// Ratio of extreme singular values of the column-scaled design matrix.
    pub condition: f64,
}

/// Solves min ‖A x − b‖₂. `sigma_floor` bounds the per-row noise estimate from below.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>, sigma_floor: f64) -> LstsqResult {
    let (rows, cols) = a.shape();
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
    let mut scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = scaled.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let utb = u.transpose() * b;
    let mut y = DVector::zeros(cols);
    for k in 0..cols {
        if sv[k] > smax * 1e-15 {
            y[k] = utb[k] / sv[k];
        }
    }
    let xs = vt.transpose() * y;
    let resid = b - &scaled * &xs;
    let residual_norm = resid.norm();
    let dof = rows.saturating_sub(cols);
    let sigma = if dof > 0 { residual_norm / (dof as f64).sqrt() } else { 0.0 }.max(sigma_floor);
    let std_errors = (0..cols)
        .map(|j| {
            let var: f64 = (0..cols)
                .filter(|&k| sv[k] > smax * 1e-15)
                .map(|k| (vt[(k, j)] / sv[k]).powi(2))
                .sum();
            sigma * var.sqrt() / scales[j]
        })
        .collect();
    LstsqResult {
        coeffs: xs.iter().zip(&scales).map(|(x, s)| x / s).collect(),
        std_errors,
        residual_norm,
        condition: smax / smin,
    }
}
