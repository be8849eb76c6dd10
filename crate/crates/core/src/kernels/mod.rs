//! Position-representation kernels of quantized symbols on uniform grids.
//!
//! Discrete transform convention: forward Σ_j x_j e^{−2πi jk/n}, unnormalized.
//! Matrices act on raw samples, so the position measure dq is folded into entries.

mod grid;
mod io;
mod matrix;
mod ops;
mod symbol;

pub use grid::{Grid1D, WaveFunction};
pub use io::{read_matrix_binary, read_wave_binary, write_matrix_binary, write_matrix_csv, write_wave_binary, write_wave_csv};
pub use matrix::{
    apply, circulant, cmatmul, hermitian_norm, low_momentum_image, low_momentum_norm, sigma_max, low_momentum_unitarity_defect, matpow, multiplier_table, unitarity_defect,
    CMatrix, KernelMatrix,
};
pub use ops::{
    apply_pseudodiff, apply_pseudodiff_with, kernel_matrix, kernel_matrix_with, kinetic_matrix, kinetic_matrix_real, short_time_kernel,
    short_time_kernel_with, symbol_kernel, KernelOptions,
};
pub use symbol::{average_symbol, average_symbol_with, QFunction, SymbolFunction};
