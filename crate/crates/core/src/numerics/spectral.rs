use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{default_schur_iterations, real_schur_with, Tolerances};
use crate::matrix::DenseMatrix;

const START_SEED: u64 = 0x5eed_0f_5ec7;

/// Spectral radius with the default tolerances.
pub fn spectral_radius(m: &DenseMatrix, tol: f64, max_iter: usize) -> f64 {
    spectral_radius_with(m, tol, max_iter, &Tolerances::default())
}

/// Power iteration from a fixed pseudo-random start. It is accepted only once
/// the Rayleigh estimate is an eigenvalue to within `tol` (small residual),
/// otherwise (complex dominant pair, ±ρ pair, slow convergence) the moduli of
/// the real Schur form are used.
pub fn spectral_radius_with(m: &DenseMatrix, tol: f64, max_iter: usize, tols: &Tolerances) -> f64 {
    assert!(m.is_square(), "spectral radius of a non-square matrix");
    let n = m.rows();
    if n == 0 || m.max_abs() == 0.0 {
        return 0.0;
    }
    if let Some(rho) = power_iteration(m, tol, max_iter) {
        return rho;
    }
    match real_schur_with(m, default_schur_iterations(n), tols) {
        Ok(s) => s.spectral_radius(),
        // Schur failing is essentially unheard of; the Frobenius norm is still a valid upper bound
        Err(_) => m.frobenius(),
    }
}

fn power_iteration(m: &DenseMatrix, tol: f64, max_iter: usize) -> Option<f64> {
    let n = m.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut x);
    for _ in 0..max_iter {
        let y = m.mul_vec(&x);
        let ny = norm(&y);
        if ny == 0.0 {
            return Some(0.0);
        }
        let lambda: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let resid = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi - lambda * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if resid <= tol * lambda.abs().max(1.0) {
            return Some(lambda.abs());
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    None
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn normalize(x: &mut [f64]) {
    let nx = norm(x);
    x.iter_mut().for_each(|v| *v /= nx);
}
