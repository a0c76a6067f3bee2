//! Reference encodings (sinusoidal, Laplacian eigenvectors, random-walk
//! return probabilities, personalized PageRank and its powers) and the
//! constructions that express some of them as automaton encodings.

use crate::encoding::{EncodingMatrix, Scheme};
use crate::error::{Error, Result};
use crate::graph::{laplacian, walk_matrix, LabeledGraph};
use crate::matrix::DenseMatrix;
use crate::numerics::{eig_symmetric, LuFactor};
use crate::sylvester::{self, Strategy};
use crate::wgwa::Wgwa;

/// PageRank damping used when none is given.
pub const DEFAULT_BETA: f64 = 0.15;
/// Laplacian eigenvalues at or below this are treated as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-8;
const PPR_RESIDUAL: f64 = 1e-9;
const LAPE_RESIDUAL: f64 = 1e-7;

/// Position p (0-based), dimensions (2j−1, 2j) hold
/// `(sin(p·ω_j), cos(p·ω_j))` with `ω_j = 10000^{−2(j−1)/k}`.
pub fn reference_sinusoidal(length: usize, k: usize) -> Result<EncodingMatrix> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidParameter(format!("sinusoidal encoding needs even k >= 2, got {k}")));
    }
    let values = DenseMatrix::from_fn(length, k, |p, d| {
        let j = d / 2;
        let omega = 10000f64.powf(-2.0 * j as f64 / k as f64);
        let x = p as f64 * omega;
        if d % 2 == 0 {
            x.sin()
        } else {
            x.cos()
        }
    });
    EncodingMatrix::new(Scheme::Sinusoidal, values)
}

/// Eigenvectors of L = D − A for the `k_enc` smallest eigenvalues.
pub fn lape(g: &LabeledGraph, k_enc: usize) -> Result<EncodingMatrix> {
    let n = g.n();
    if k_enc == 0 || k_enc > n {
        return Err(Error::InvalidParameter(format!(
            "a {n}-node graph has {n} Laplacian eigenvectors; asked for {k_enc}"
        )));
    }
    let eig = eig_symmetric(&laplacian(g))?;
    let values = eig.vectors.block(0, 0, n, k_enc);
    EncodingMatrix::new(Scheme::Lape, values)
}

/// The n-state automaton for which `P = Vᵀ` (eigenvectors of L as rows) is a
/// solution of `P = μ P L + α ℓ` with ℓ = I.
#[derive(Debug, Clone)]
pub struct LapeConstruction {
    /// μ = Λ⁻¹ on the nonzero spectrum and 0 on the kernel; α carries the
    /// kernel rows of Vᵀ; τ is all ones.
    pub wgwa: Wgwa,
    pub eigenvalues: Vec<f64>,
    /// `Vᵀ` transposed, i.e. the full LAPE matrix (n×n).
    pub encoding: EncodingMatrix,
    /// ‖P − μPL‖_max over the rows with nonzero eigenvalue.
    pub remark_residual: f64,
    /// ‖P − μPL − αℓ‖_max over all rows.
    pub residual: f64,
}

pub fn lape_wgwa_construction(g: &LabeledGraph) -> Result<LapeConstruction> {
    let n = g.n();
    let l = laplacian(g);
    let eig = eig_symmetric(&l)?;
    let p = eig.vectors.transpose();
    let inv: Vec<f64> = eig
        .values
        .iter()
        .map(|&lam| if lam.abs() <= ZERO_EIGENVALUE { 0.0 } else { 1.0 / lam })
        .collect();
    let mu = DenseMatrix::from_diag(&inv);
    let alpha = DenseMatrix::from_fn(n, n, |i, j| if inv[i] == 0.0 { p[(i, j)] } else { 0.0 });

    let mpl = mu.matmul(&p).matmul(&l);
    let mut remark_residual: f64 = 0.0;
    for i in (0..n).filter(|&i| inv[i] != 0.0) {
        for j in 0..n {
            remark_residual = remark_residual.max((p[(i, j)] - mpl[(i, j)]).abs());
        }
    }
    // ℓ = I, so αℓ = α
    let residual = p.sub(&mpl).sub(&alpha).max_abs();
    if !(residual <= LAPE_RESIDUAL) {
        return Err(Error::Residual {
            method: "lape_construction",
            residual,
            bound: LAPE_RESIDUAL,
        });
    }
    let wgwa = Wgwa::new(alpha, mu, DenseMatrix::filled(n, n, 1.0))?;
    let encoding = EncodingMatrix::new(Scheme::Lape, eig.vectors.clone())?;
    Ok(LapeConstruction {
        wgwa,
        eigenvalues: eig.values,
        encoding,
        remark_residual,
        residual,
    })
}

/// Row u holds the return probabilities `[W]_uu, [W²]_uu, …, [W^k]_uu` of the
/// random walk W = A·D⁻¹.
pub fn rw_encoding(g: &LabeledGraph, k_enc: usize) -> Result<EncodingMatrix> {
    let w = walk_matrix(g)?;
    let n = g.n();
    let mut values = DenseMatrix::zeros(n, k_enc);
    let mut power = DenseMatrix::identity(n);
    for i in 0..k_enc {
        power = power.matmul(&w);
        for u in 0..n {
            values[(u, i)] = power[(u, u)];
        }
    }
    EncodingMatrix::new(Scheme::Rw, values)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("PageRank damping must lie in (0, 1], got {beta}")))
    }
}

/// Solves `Π = βI + (1−β) Π W` as `(I − (1−β)W)ᵀ Πᵀ = βI`.
pub fn ppr_matrix(walk: &DenseMatrix, beta: f64) -> Result<DenseMatrix> {
    check_beta(beta)?;
    if !walk.is_square() {
        return Err(Error::NotSquare {
            rows: walk.rows(),
            cols: walk.cols(),
        });
    }
    let n = walk.rows();
    let mut system = walk.transpose().scale(-(1.0 - beta));
    for i in 0..n {
        system[(i, i)] += 1.0;
    }
    let pi = LuFactor::new(&system)?
        .solve_matrix(&DenseMatrix::identity(n).scale(beta))
        .transpose();
    let residual = pi
        .sub(&pi.matmul(walk).scale(1.0 - beta))
        .sub(&DenseMatrix::identity(n).scale(beta))
        .max_abs();
    let bound = PPR_RESIDUAL * pi.max_abs().max(1.0);
    if !(residual <= bound) {
        return Err(Error::Residual {
            method: "ppr",
            residual,
            bound,
        });
    }
    Ok(pi)
}

/// Truncated series `β Σ_t (1−β)^t W^t`, stopped once the scalar weight of the
/// next term falls below `tail`. For a column-stochastic W every entry of W^t
/// is at most 1, so `tail` bounds each dropped term entrywise.
pub fn ppr_series(walk: &DenseMatrix, beta: f64, tail: f64) -> Result<DenseMatrix> {
    check_beta(beta)?;
    let n = walk.rows();
    let mut sum = DenseMatrix::zeros(n, n);
    let mut term = DenseMatrix::identity(n);
    let mut weight = beta;
    while weight >= tail {
        sum = sum.add(&term.scale(weight));
        term = term.matmul(walk);
        weight *= 1.0 - beta;
    }
    Ok(sum)
}

/// Diagonal of the PPR matrix as an n×1 encoding.
pub fn ppr_diag_encoding(g: &LabeledGraph, beta: f64) -> Result<EncodingMatrix> {
    let pi = ppr_matrix(&walk_matrix(g)?, beta)?;
    let values = DenseMatrix::from_vec(g.n(), 1, pi.diag())?;
    Ok(EncodingMatrix::new(Scheme::PprDiag, values)?.with_meta(|m| m.beta = Some(beta)))
}

/// Column i (1-based) holds the diagonal of the PPR matrix built with the
/// i-step walk Wⁱ.
pub fn pprp_encoding(g: &LabeledGraph, beta: f64, k_enc: usize) -> Result<EncodingMatrix> {
    let w = walk_matrix(g)?;
    let n = g.n();
    let mut values = DenseMatrix::zeros(n, k_enc);
    let mut power = DenseMatrix::identity(n);
    for i in 0..k_enc {
        power = power.matmul(&w);
        let pi = ppr_matrix(&power, beta)?;
        values.set_col(i, &pi.diag());
    }
    Ok(EncodingMatrix::new(Scheme::Pprp, values)?.with_meta(|m| m.beta = Some(beta)))
}

/// PPR computed as n one-state automaton encodings over the walk matrix:
/// source s uses μ = 1 − β and α = β·e_sᵀ, so its solution row is row s of Π.
pub fn gape_as_ppr(g: &LabeledGraph, beta: f64, strategy: Strategy) -> Result<DenseMatrix> {
    check_beta(beta)?;
    let w = walk_matrix(g)?;
    let n = g.n();
    let mu = DenseMatrix::filled(1, 1, 1.0 - beta);
    let mut out = DenseMatrix::zeros(n, n);
    for s in 0..n {
        let mut c = DenseMatrix::zeros(1, n);
        c[(0, s)] = beta;
        let (p, _) = sylvester::solve_gape_system(&mu, &w, &c, strategy)
            .map_err(|e| e.context(format!("PPR source node {}", s + 1)))?;
        out.row_mut(s).copy_from_slice(p.row(0));
    }
    Ok(out)
}

/// Per-column `(x − min)/(max − min)`; constant columns become 0.
pub fn minmax_normalize(e: &EncodingMatrix) -> EncodingMatrix {
    EncodingMatrix {
        scheme: e.scheme,
        values: minmax_columns(&e.values),
        meta: e.meta.clone(),
    }
}

pub fn minmax_columns(m: &DenseMatrix) -> DenseMatrix {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let col = m.col(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = hi - lo;
        let scaled: Vec<f64> = col
            .iter()
            .map(|&x| if span > 0.0 { (x - lo) / span } else { 0.0 })
            .collect();
        out.set_col(j, &scaled);
    }
    out
}
