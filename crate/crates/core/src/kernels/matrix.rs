//! Dense complex grid matrices and the operations shared by kernels and propagators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::{Grid1D, WaveFunction};
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Operator matrix on grid samples: (Kψ)_i = Σ_j K_ij ψ_j. The dq of the
/// position integral is folded into the entries.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    pub entries: CMatrix,
    pub grid: Grid1D,
    pub symbol_id: String,
    pub measure_id: String,
}

impl KernelMatrix {
    pub fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        apply(&self.entries, &self.grid, psi)
    }

    /// ‖K − K†‖_F / ‖K‖_F
    pub fn hermiticity_defect(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.norm() / self.entries.norm().max(f64::MIN_POSITIVE)
    }
}

pub fn apply(m: &CMatrix, grid: &Grid1D, psi: &WaveFunction) -> Result<WaveFunction> {
    if !grid.same_as(&psi.grid) {
        return Err(Error::GridMismatch("wavefunction grid differs from matrix grid".into()));
    }
    let v = nalgebra::DVector::from_column_slice(&psi.samples);
    let out = m * v;
    Ok(WaveFunction { grid: *grid, samples: out.iter().copied().collect() })
}

fn split(a: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (a.map(|z| z.re), a.map(|z| z.im))
}

/// Complex product through four real products.
pub fn cmatmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "dimension mismatch in cmatmul");
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let ((rr, ii), (ri, ir)) = rayon::join(|| rayon::join(|| &ar * &br, || &ai * &bi), || rayon::join(|| &ar * &bi, || &ai * &br));
    let re = rr - ii;
    let im = ri + ir;
    CMatrix::from_fn(a.nrows(), b.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

/// Aᴺ by binary powering.
pub fn matpow(a: &CMatrix, n: usize) -> CMatrix {
    assert!(n >= 1, "matpow needs n >= 1");
    let mut result: Option<CMatrix> = None;
    let mut base = a.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => cmatmul(&r, &base),
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = cmatmul(&base, &base);
    }
    result.expect("n >= 1")
}

/// Circulant C_ij = c[(i − j) mod n].
pub fn circulant(c: &[Complex64]) -> CMatrix {
    let n = c.len();
    CMatrix::from_fn(n, n, |i, j| c[(i + n - j) % n])
}

/// t[d] = (1/n) Σ_l w(p_l) e^{2πi l d/n} for d = 0..n, computed with one inverse FFT.
pub fn multiplier_table(grid: &Grid1D, w: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let n = grid.n;
    let mut buf: Vec<Complex64> = (0..n).map(|k| w(grid.p_bin(k))).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|z| *z *= inv);
    buf
}

/// Columns of M applied to the normalized plane waves with |p| < p_Nyquist/2.
pub fn low_momentum_image(m: &CMatrix, grid: &Grid1D) -> CMatrix {
    let n = grid.n;
    let ls: Vec<usize> = (0..n).filter(|&k| grid.signed_index(k).unsigned_abs() < (n / 4) as u64).collect();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = CMatrix::zeros(n, ls.len());
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            row[j] = m[(i, j)];
        }
        // (MΦ)_{i,l} = n^{-1/2} Σ_j M_ij e^{2πi l j/n}
        fft.process(&mut row);
        for (c, &k) in ls.iter().enumerate() {
            out[(i, c)] = row[k] * scale;
        }
    }
    out
}

/// Largest singular value of M restricted to states with |p| < p_Nyquist/2.
pub fn low_momentum_norm(m: &CMatrix, grid: &Grid1D) -> f64 {
    sigma_max(&low_momentum_image(m, grid))
}

/// Largest singular value.
pub fn sigma_max(b: &CMatrix) -> f64 {
    let g = cmatmul(&b.adjoint(), b);
    let eig = nalgebra::SymmetricEigen::new(g);
    eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v)).sqrt()
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn hermitian_norm(m: &CMatrix) -> f64 {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    eig.eigenvalues.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()))
}

/// ‖U†U − I‖₂
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let mut g = cmatmul(&u.adjoint(), u);
    for i in 0..g.nrows() {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    hermitian_norm(&g)
}

/// ‖(U†U − I)Φ‖ on the low-momentum subspace.
pub fn low_momentum_unitarity_defect(u: &CMatrix, grid: &Grid1D) -> f64 {
    let mut g = cmatmul(&u.adjoint(), u);
    for i in 0..g.nrows() {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    low_momentum_norm(&g, grid)
}
