//! Spectral reference propagator e^{−iĤT/ħ} for Ĥ = kinetic_matrix + diag(V).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::slice::PropagatorMatrix;
use crate::classical::HamiltonianSpec;
use crate::error::{Error, Result};
use crate::kernels::{kinetic_matrix_real, CMatrix, Grid1D, WaveFunction};

/// Eigendecomposition of the discretized (real symmetric) Hamiltonian.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub grid: Grid1D,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn new(h: &HamiltonianSpec, g: &Grid1D) -> Result<Self> {
        if h.is_magnetic() {
            return Err(Error::MagneticUnsupported("the reference Hamiltonian is kinetic + diag(V)"));
        }
        let mut hm = kinetic_matrix_real(g, h.mass);
        for i in 0..g.n {
            hm[(i, i)] += h.v.v(g.q(i));
        }
        if !hm.iter().all(|v| v.is_finite()) {
            return Err(Error::Eigen("non-finite Hamiltonian entries".into()));
        }
        let eig = SymmetricEigen::try_new(hm, f64::EPSILON, 0).ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))?;
        Ok(Self { grid: *g, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn propagator(&self, t: f64) -> PropagatorMatrix {
        let q = &self.eigenvectors;
        let hbar = self.grid.hbar;
        let mut qc = q.clone();
        let mut qs = q.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let (s, c) = (lam * t / hbar).sin_cos();
            qc.column_mut(k).scale_mut(c);
            qs.column_mut(k).scale_mut(s);
        }
        let qt = q.transpose();
        let (re, im) = rayon::join(|| &qc * &qt, || &qs * &qt);
        let n = self.grid.n;
        let entries = CMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], -im[(i, j)]));
        PropagatorMatrix { entries, grid: self.grid, duration: t, scheme: "reference".into(), slices: 0 }
    }

    /// e^{−iĤt/ħ}ψ without forming the matrix.
    pub fn evolve(&self, psi: &WaveFunction, t: f64) -> Result<WaveFunction> {
        if !self.grid.same_as(&psi.grid) {
            return Err(Error::GridMismatch("wavefunction grid differs from spectrum grid".into()));
        }
        let q = &self.eigenvectors;
        let re = DVector::from_iterator(self.grid.n, psi.samples.iter().map(|z| z.re));
        let im = DVector::from_iterator(self.grid.n, psi.samples.iter().map(|z| z.im));
        let (cr, ci) = (q.tr_mul(&re), q.tr_mul(&im));
        let hbar = self.grid.hbar;
        let mut rr = DVector::zeros(self.grid.n);
        let mut ri = DVector::zeros(self.grid.n);
        for k in 0..self.grid.n {
            let ph = Complex64::from_polar(1.0, -self.eigenvalues[k] * t / hbar) * Complex64::new(cr[k], ci[k]);
            rr[k] = ph.re;
            ri[k] = ph.im;
        }
        let (or, oi) = (q * rr, q * ri);
        WaveFunction::new(self.grid, (0..self.grid.n).map(|i| Complex64::new(or[i], oi[i])).collect())
    }
}

pub fn reference_propagator(h: &HamiltonianSpec, g: &Grid1D, t: f64) -> Result<PropagatorMatrix> {
    Ok(Spectrum::new(h, g)?.propagator(t))
}
