//! CSV and little-endian binary layouts for grid matrices and wavefunctions.
//!
//! Binary: u64 n, f64 q_min, f64 q_max, f64 hbar, then (re, im) pairs row-major.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::grid::{Grid1D, WaveFunction};
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// One matrix row per line: `re,im,re,im,...`.
pub fn write_matrix_csv(w: &mut impl Write, m: &CMatrix) -> Result<()> {
    for i in 0..m.nrows() {
        let mut line = String::new();
        for j in 0..m.ncols() {
            if j > 0 {
                line.push(',');
            }
            let z = m[(i, j)];
            line.push_str(&format!("{},{}", z.re, z.im));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// One sample per line: `q,re,im`.
pub fn write_wave_csv(w: &mut impl Write, psi: &WaveFunction) -> Result<()> {
    for (i, z) in psi.samples.iter().enumerate() {
        writeln!(w, "{},{},{}", psi.grid.q(i), z.re, z.im)?;
    }
    Ok(())
}

fn write_header(w: &mut impl Write, g: &Grid1D) -> Result<()> {
    w.write_all(&(g.n as u64).to_le_bytes())?;
    for v in [g.q_min, g.q_max, g.hbar] {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_header(r: &mut impl Read) -> Result<Grid1D> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    let n = usize::try_from(n).map_err(|_| Error::InvalidInput("grid size overflows usize".into()))?;
    let (q_min, q_max, hbar) = (read_f64(r)?, read_f64(r)?, read_f64(r)?);
    Grid1D::new(q_min, q_max, n, hbar)
}

pub fn write_matrix_binary(w: &mut impl Write, g: &Grid1D, m: &CMatrix) -> Result<()> {
    if m.nrows() != g.n || m.ncols() != g.n {
        return Err(Error::GridMismatch(format!("{}x{} matrix for grid of {}", m.nrows(), m.ncols(), g.n)));
    }
    write_header(w, g)?;
    for i in 0..g.n {
        for j in 0..g.n {
            let z = m[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix_binary(r: &mut impl Read) -> Result<(Grid1D, CMatrix)> {
    let g = read_header(r)?;
    let mut m = CMatrix::zeros(g.n, g.n);
    for i in 0..g.n {
        for j in 0..g.n {
            m[(i, j)] = Complex64::new(read_f64(r)?, read_f64(r)?);
        }
    }
    Ok((g, m))
}

pub fn write_wave_binary(w: &mut impl Write, psi: &WaveFunction) -> Result<()> {
    write_header(w, &psi.grid)?;
    for z in &psi.samples {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_wave_binary(r: &mut impl Read) -> Result<WaveFunction> {
    let g = read_header(r)?;
    let samples = (0..g.n).map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?))).collect::<Result<Vec<_>>>()?;
    WaveFunction::new(g, samples)
}
