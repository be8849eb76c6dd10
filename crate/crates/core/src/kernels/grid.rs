//! Uniform position grids, their conjugate momentum grids, and grid wavefunctions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// q_i = q_min + i·dq for i < n; p_l = 2πħ l/(n dq) for l = −n/2 … n/2 − 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub q_min: f64,
    pub q_max: f64,
    pub n: usize,
    pub hbar: f64,
}

impl Grid1D {
    pub fn new(q_min: f64, q_max: f64, n: usize, hbar: f64) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("grid size must be even and >= 8, got {n}")));
        }
        if !(q_max > q_min) || !q_min.is_finite() || !q_max.is_finite() {
            return Err(Error::InvalidInput(format!("grid bounds must satisfy q_min < q_max, got [{q_min}, {q_max}]")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { q_min, q_max, n, hbar })
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / self.n as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.q(i)).collect()
    }

    /// Signed momentum index l ∈ [−n/2, n/2) of FFT bin k.
    pub fn signed_index(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    pub fn p_of_index(&self, l: i64) -> f64 {
        2.0 * PI * self.hbar * l as f64 / (self.n as f64 * self.dq())
    }

    /// Momentum of FFT bin k.
    pub fn p_bin(&self, k: usize) -> f64 {
        self.p_of_index(self.signed_index(k))
    }

    /// Centered momentum grid, ascending.
    pub fn momenta(&self) -> Vec<f64> {
        let h = self.n as i64 / 2;
        (-h..h).map(|l| self.p_of_index(l)).collect()
    }

    pub fn p_nyquist(&self) -> f64 {
        PI * self.hbar / self.dq()
    }

    pub fn length(&self) -> f64 {
        self.q_max - self.q_min
    }

    /// Signed index offset from j to the nearest periodic image of i, in [−n/2, n/2].
    pub fn nearest_offset(&self, i: usize, j: usize) -> i64 {
        let n = self.n as i64;
        let mut d = i as i64 - j as i64;
        if d > n / 2 {
            d -= n;
        } else if d < -n / 2 {
            d += n;
        }
        d
    }

    /// Maps x into [q_min, q_max).
    pub fn wrap(&self, x: f64) -> f64 {
        self.q_min + (x - self.q_min).rem_euclid(self.length())
    }

    pub fn same_as(&self, o: &Grid1D) -> bool {
        self == o
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    pub grid: Grid1D,
    pub samples: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {}", samples.len(), grid.n)));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    /// Normalized Gaussian packet centred at q₀ with width σ and mean momentum p₀.
    pub fn gaussian(grid: Grid1D, q0: f64, sigma: f64, p0: f64) -> Self {
        let samples = grid
            .positions()
            .into_iter()
            .map(|q| {
                let x = (q - q0) / sigma;
                Complex64::from_polar((-0.5 * x * x).exp(), p0 * q / grid.hbar)
            })
            .collect();
        let mut w = Self { grid, samples };
        let nrm = w.norm();
        w.scale(1.0 / nrm);
        w
    }

    /// e^{i p_l q/ħ}, normalized.
    pub fn plane_wave(grid: Grid1D, l: i64) -> Self {
        let p = grid.p_of_index(l);
        let samples = grid.positions().into_iter().map(|q| Complex64::from_polar(1.0, p * (q - grid.q_min) / grid.hbar)).collect();
        let mut w = Self { grid, samples };
        let nrm = w.norm();
        w.scale(1.0 / nrm);
        w
    }

    /// (Σ|ψ|² dq)^{1/2}
    pub fn norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dq()).sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        for z in &mut self.samples {
            *z *= c;
        }
    }

    /// dq-weighted distance.
    pub fn distance(&self, o: &WaveFunction) -> f64 {
        (self.samples.iter().zip(&o.samples).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * self.grid.dq()).sqrt()
    }
}
