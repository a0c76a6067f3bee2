//! Dense linear-algebra kernels: symmetric eigendecomposition (cyclic Jacobi),
//! real Schur form (Hessenberg reduction + Francis double-shift QR), spectral
//! radius, Kronecker products and partial-pivot LU solves.
//!
//! Every tolerance used here lives in [`Tolerances`] so tests can tighten or
//! loosen them in one place.

mod eigen;
mod kron;
mod lu;
mod schur;
mod spectral;

pub use eigen::{eig_symmetric, eig_symmetric_with, EigenDecomposition};
pub use kron::kronecker;
pub use lu::{solve_dense, solve_dense_with, LuFactor};
pub use schur::{real_schur, real_schur_with, SchurDecomposition};
pub use spectral::{spectral_radius, spectral_radius_with};

/// Numerical thresholds shared by all kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this
    /// multiple of the input's Frobenius norm.
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Largest |m_ij - m_ji| (relative to max(1, ‖m‖_max)) accepted as symmetric.
    pub symmetry: f64,
    /// Subdiagonal entry h_{i+1,i} is deflated when below this multiple of |h_ii| + |h_{i+1,i+1}|.
    pub schur_deflation: f64,
    /// LU pivots below this multiple of ‖a‖_max count as zero.
    pub singular_pivot: f64,
    /// Components below this magnitude are skipped when fixing eigenvector signs.
    pub sign_threshold: f64,
    pub spectral_tol: f64,
    pub spectral_max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            jacobi_off_diagonal: 1e-12,
            jacobi_max_sweeps: 100,
            symmetry: 1e-10,
            schur_deflation: 1e-12,
            singular_pivot: 1e-14,
            sign_threshold: 1e-10,
            spectral_tol: 1e-10,
            spectral_max_iter: 500,
        }
    }
}

/// Default QR sweep budget for an `n`x`n` Schur decomposition.
pub fn default_schur_iterations(n: usize) -> usize {
    100 * n.max(1)
}
