//! Chebyshev interpolants on [0, 1] sampled at Lobatto points.

use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq)]
pub struct Cheb {
    vals: Vec<f64>,
}

pub fn nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|j| 0.5 * (1.0 - (PI * j as f64 / n as f64).cos())).collect()
}

impl Cheb {
    /// Degree-`n` interpolant of `f` (n + 1 nodes, both endpoints included).
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Self {
        Self { vals: nodes(n).into_iter().map(f).collect() }
    }

    pub fn from_values(vals: Vec<f64>) -> Self {
        assert!(vals.len() >= 2);
        Self { vals }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self { vals: vec![c; n + 1] }
    }

    pub fn degree(&self) -> usize {
        self.vals.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn nodes(&self) -> Vec<f64> {
        nodes(self.degree())
    }

    pub fn coefficients(&self) -> Vec<f64> {
        let n = self.degree();
        let nf = n as f64;
        (0..=n)
            .map(|k| {
                let mut s = 0.0;
                for (j, &f) in self.vals.iter().enumerate() {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    s += w * f * sign * (PI * (k * j) as f64 / nf).cos();
                }
                let a = 2.0 * s / nf;
                if k == 0 || k == n {
                    0.5 * a
                } else {
                    a
                }
            })
            .collect()
    }

    pub fn eval(&self, tau: f64) -> f64 {
        clenshaw(&self.coefficients(), 2.0 * tau - 1.0)
    }

    pub fn eval_many(&self, taus: &[f64]) -> Vec<f64> {
        let c = self.coefficients();
        taus.iter().map(|&t| clenshaw(&c, 2.0 * t - 1.0)).collect()
    }

    /// ∫₀¹ f dτ
    pub fn mean(&self) -> f64 {
        self.coefficients()
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, a)| a / (1.0 - (k * k) as f64))
            .sum()
    }

    /// τ ↦ ∫₀^τ f
    pub fn antiderivative(&self) -> Self {
        let a = self.coefficients();
        let n = a.len() - 1;
        let get = |k: usize| a.get(k).copied().unwrap_or(0.0);
        let mut b = vec![0.0; n + 2];
        for (k, bk) in b.iter_mut().enumerate().skip(1) {
            let prev = if k == 1 { 2.0 * get(0) } else { get(k - 1) };
            *bk = (prev - get(k + 1)) / (2.0 * k as f64);
        }
        b[0] = -b.iter().enumerate().skip(1).map(|(k, v)| if k % 2 == 0 { *v } else { -v }).sum::<f64>();
        let vals = nodes(n).into_iter().map(|t| 0.5 * clenshaw(&b, 2.0 * t - 1.0)).collect();
        Self { vals }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { vals: self.vals.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip(&self, o: &Cheb, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.vals.len(), o.vals.len(), "Chebyshev degree mismatch");
        Self { vals: self.vals.iter().zip(&o.vals).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn add(&self, o: &Cheb) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn mul(&self, o: &Cheb) -> Self {
        self.zip(o, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn shift(&self, c: f64) -> Self {
        self.map(|v| v + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn clenshaw(a: &[f64], x: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ak in a.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ak;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + a[0]
}
