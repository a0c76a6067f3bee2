//! Solvers for the Stein-type fixed point `X = M·X·N + C`.
//!
//! `M` is k×k, `N` is n×n and `C`, `X` are k×n. GAPE instantiates this with
//! the transition matrix on the left and the adjacency on the right. Three
//! independent methods are provided so each can check the others:
//!
//! * [`solve_kronecker`]: dense solve of `(I − Nᵀ⊗M) vec X = vec C`.
//! * [`solve_fixed_point`]: iterate `X ← M X N + C` from `X = C`.
//! * [`solve_schur`]: reduce `M` and `N` to real Schur form and back-substitute
//!   over the 1×1/2×2 block grid.
//!
//! Every accepted solution satisfies `‖X − MXN − C‖_max ≤ 1e-6·max(1, ‖C‖_max)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::numerics::{
    default_schur_iterations, kronecker, real_schur, spectral_radius, LuFactor, SchurDecomposition, Tolerances,
};

pub const FIXED_POINT_TOL: f64 = 1e-10;
pub const FIXED_POINT_MAX_ITER: usize = 10_000;
/// Largest k·n the Kronecker oracle accepts.
pub const KRONECKER_MAX_DIM: usize = 10_000;
/// `Strategy::Auto` uses the Kronecker oracle up to this k·n.
pub const AUTO_KRONECKER_MAX_DIM: usize = 2_500;
/// The fixed-point iteration requires ρ(M)·ρ(N) < 1 − this margin.
pub const WELL_POSED_MARGIN: f64 = 1e-6;
const RESIDUAL_FACTOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Kronecker,
    FixedPoint,
    Schur,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::Kronecker => "kronecker",
            SolveMethod::FixedPoint => "fixed_point",
            SolveMethod::Schur => "schur",
        }
    }
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: SolveMethod,
    /// ‖X − MXN − C‖_max of the returned solution.
    pub residual: f64,
    /// Iterations taken; 0 for the direct methods.
    pub iterations: usize,
    /// Estimate of ρ(M)·ρ(N) = ρ(Nᵀ⊗M).
    pub rho_product: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    Kronecker,
    FixedPoint,
    Schur,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Kronecker => "kronecker",
            Strategy::FixedPoint => "fixed-point",
            Strategy::Schur => "schur",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "kronecker" => Ok(Strategy::Kronecker),
            "fixed-point" | "fixed_point" => Ok(Strategy::FixedPoint),
            "schur" => Ok(Strategy::Schur),
            other => Err(Error::Parse(format!("unknown solver strategy `{other}`"))),
        }
    }
}

/// ‖X − M·X·N − C‖_max.
pub fn residual(m: &DenseMatrix, n: &DenseMatrix, c: &DenseMatrix, x: &DenseMatrix) -> f64 {
    x.sub(&m.matmul(x).matmul(n)).sub(c).max_abs()
}

/// Residual accepted for a right-hand side `c`.
pub fn residual_bound(c: &DenseMatrix) -> f64 {
    RESIDUAL_FACTOR * c.max_abs().max(1.0)
}

/// ρ(M)·ρ(N), which equals ρ(Nᵀ⊗M).
pub fn rho_product(m: &DenseMatrix, n: &DenseMatrix) -> f64 {
    let tol = Tolerances::default();
    spectral_radius(m, tol.spectral_tol, tol.spectral_max_iter)
        * spectral_radius(n, tol.spectral_tol, tol.spectral_max_iter)
}

fn check_shapes(m: &DenseMatrix, n: &DenseMatrix, c: &DenseMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !n.is_square() {
        return Err(Error::NotSquare {
            rows: n.rows(),
            cols: n.cols(),
        });
    }
    if c.shape() != (m.rows(), n.rows()) {
        return Err(Error::Dimension(format!(
            "right-hand side is {}x{}, expected {}x{}",
            c.rows(),
            c.cols(),
            m.rows(),
            n.rows()
        )));
    }
    Ok(())
}

fn accept(
    method: SolveMethod,
    m: &DenseMatrix,
    n: &DenseMatrix,
    c: &DenseMatrix,
    x: DenseMatrix,
    iterations: usize,
    rho_product: f64,
) -> Result<(DenseMatrix, SolveReport)> {
    let res = residual(m, n, c, &x);
    let bound = residual_bound(c);
    if !x.is_finite() || !(res <= bound) {
        return Err(Error::Residual {
            method: method.as_str(),
            residual: res,
            bound,
        });
    }
    Ok((
        x,
        SolveReport {
            method,
            residual: res,
            iterations,
            rho_product,
        },
    ))
}

/// Dense oracle: solves `(I − Nᵀ⊗M) vec X = vec C` with column-major `vec`.
pub fn solve_kronecker(m: &DenseMatrix, n: &DenseMatrix, c: &DenseMatrix) -> Result<(DenseMatrix, SolveReport)> {
    check_shapes(m, n, c)?;
    let (k, nn) = c.shape();
    if k * nn > KRONECKER_MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "Kronecker solve of size {} exceeds the oracle limit {KRONECKER_MAX_DIM}",
            k * nn
        )));
    }
    let rho = rho_product(m, n);
    let mut system = kronecker(&n.transpose(), m).scale(-1.0);
    for i in 0..k * nn {
        system[(i, i)] += 1.0;
    }
    let lu = LuFactor::new(&system).map_err(|_| Error::SingularSystem { rho_product: rho })?;
    let rhs: Vec<f64> = (0..k * nn).map(|idx| c[(idx % k, idx / k)]).collect();
    let v = lu.solve(&rhs);
    let x = DenseMatrix::from_fn(k, nn, |p, j| v[j * k + p]);
    accept(SolveMethod::Kronecker, m, n, c, x, 0, rho)
}

/// Iterates `X ← M X N + C` from `X = C` until successive iterates differ by at
/// most `tol` in max norm.
pub fn solve_fixed_point(
    m: &DenseMatrix,
    n: &DenseMatrix,
    c: &DenseMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(DenseMatrix, SolveReport)> {
    check_shapes(m, n, c)?;
    let rho = rho_product(m, n);
    if !(rho < 1.0 - WELL_POSED_MARGIN) {
        return Err(Error::IllPosed { rho_product: rho });
    }
    let mut x = c.clone();
    let mut delta = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let next = m.matmul(&x).matmul(n).add(c);
        delta = next.max_abs_diff(&x);
        x = next;
        if delta <= tol {
            return accept(SolveMethod::FixedPoint, m, n, c, x, iterations, rho);
        }
        if !delta.is_finite() {
            break;
        }
    }
    Err(Error::FixedPointNoConvergence { iterations, delta })
}

/// Schur-form solver for `X = M X N + C`.
pub fn solve_schur(m: &DenseMatrix, n: &DenseMatrix, c: &DenseMatrix) -> Result<(DenseMatrix, SolveReport)> {
    check_shapes(m, n, c)?;
    let stein = SchurStein::new(m, n)?;
    let x = stein.solve_unchecked(c)?;
    accept(SolveMethod::Schur, m, n, c, x, 0, stein.rho_product())
}

/// Real Schur factorizations of `M` and `N`, reusable across right-hand sides
/// and for the transposed equation `X = Mᵀ X Nᵀ + C`.
#[derive(Debug, Clone)]
pub struct SchurStein {
    m: DenseMatrix,
    n: DenseMatrix,
    left: SchurDecomposition,
    right: SchurDecomposition,
}

impl SchurStein {
    pub fn new(m: &DenseMatrix, n: &DenseMatrix) -> Result<Self> {
        let left = real_schur(m, default_schur_iterations(m.rows()))?;
        let right = real_schur(n, default_schur_iterations(n.rows()))?;
        Ok(Self::from_parts(m.clone(), n.clone(), left, right))
    }

    /// Reuses an existing factorization of `N`, e.g. one adjacency across many `M`.
    pub fn with_right(m: &DenseMatrix, n: &DenseMatrix, right: SchurDecomposition) -> Result<Self> {
        let left = real_schur(m, default_schur_iterations(m.rows()))?;
        Ok(Self::from_parts(m.clone(), n.clone(), left, right))
    }

    fn from_parts(m: DenseMatrix, n: DenseMatrix, left: SchurDecomposition, right: SchurDecomposition) -> Self {
        SchurStein { m, n, left, right }
    }

    pub fn right(&self) -> &SchurDecomposition {
        &self.right
    }

    pub fn rho_product(&self) -> f64 {
        self.left.spectral_radius() * self.right.spectral_radius()
    }

    /// Solves `X = M X N + C`, enforcing the residual bound.
    pub fn solve(&self, c: &DenseMatrix) -> Result<DenseMatrix> {
        check_shapes(&self.m, &self.n, c)?;
        let x = self.solve_unchecked(c)?;
        accept(SolveMethod::Schur, &self.m, &self.n, c, x, 0, 0.0).map(|(x, _)| x)
    }

    /// Solves the transposed equation `X = Mᵀ X Nᵀ + C`.
    pub fn solve_transposed(&self, c: &DenseMatrix) -> Result<DenseMatrix> {
        let (mt, nt) = (self.m.transpose(), self.n.transpose());
        check_shapes(&mt, &nt, c)?;
        let (u, t) = (&self.left.q, &self.left.t);
        let (v, s) = (&self.right.q, &self.right.t);
        // Tᵀ and Sᵀ are lower quasi-triangular; reversing rows and columns makes
        // them upper again so the same back-substitution applies.
        let ct = reverse(&u.transpose().matmul(c).matmul(v));
        let y = quasi_triangular_stein(&antitranspose(t), &antitranspose(s), &ct)?;
        let x = u.matmul(&reverse(&y)).matmul(&v.transpose());
        accept(SolveMethod::Schur, &mt, &nt, c, x, 0, 0.0).map(|(x, _)| x)
    }

    fn solve_unchecked(&self, c: &DenseMatrix) -> Result<DenseMatrix> {
        let (u, t) = (&self.left.q, &self.left.t);
        let (v, s) = (&self.right.q, &self.right.t);
        let ct = u.transpose().matmul(c).matmul(v);
        let y = quasi_triangular_stein(t, s, &ct)?;
        Ok(u.matmul(&y).matmul(&v.transpose()))
    }
}

/// `out[i][j] = m[r−1−i][c−1−j]`.
fn reverse(m: &DenseMatrix) -> DenseMatrix {
    let (r, c) = m.shape();
    DenseMatrix::from_fn(r, c, |i, j| m[(r - 1 - i, c - 1 - j)])
}

/// Transpose about the anti-diagonal: `out[i][j] = m[n−1−j][n−1−i]`.
fn antitranspose(m: &DenseMatrix) -> DenseMatrix {
    let n = m.rows();
    DenseMatrix::from_fn(n, n, |i, j| m[(n - 1 - j, n - 1 - i)])
}

fn quasi_blocks(t: &DenseMatrix) -> Vec<(usize, usize)> {
    let n = t.rows();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let size = if i + 1 < n && t[(i + 1, i)] != 0.0 { 2 } else { 1 };
        out.push((i, size));
        i += size;
    }
    out
}

/// Solves `X = T X S + C` for upper quasi-triangular `T` (k×k) and `S` (n×n).
///
/// Column blocks of `S` go left to right, row blocks of `T` bottom to top.
/// For column block J, `Z = X[:, <J] · S[<J, J]` is formed once; `y` then
/// accumulates `Z_P + X_PJ · S_JJ` as the row blocks below are solved.
fn quasi_triangular_stein(t: &DenseMatrix, s: &DenseMatrix, c: &DenseMatrix) -> Result<DenseMatrix> {
    let (k, n) = c.shape();
    let row_blocks = quasi_blocks(t);
    let col_blocks = quasi_blocks(s);
    let mut x = DenseMatrix::zeros(k, n);

    for (jb, &(cj, cw)) in col_blocks.iter().enumerate() {
        let mut y = DenseMatrix::zeros(k, cw);
        for p in 0..k {
            for q in 0..cj {
                let xpq = x[(p, q)];
                if xpq == 0.0 {
                    continue;
                }
                for j in 0..cw {
                    y[(p, j)] += xpq * s[(q, cj + j)];
                }
            }
        }

        for (ib, &(ri, rh)) in row_blocks.iter().enumerate().rev() {
            let mut rhs = [0.0; 4];
            for i in 0..rh {
                for j in 0..cw {
                    let mut acc = c[(ri + i, cj + j)];
                    for p in ri..k {
                        acc += t[(ri + i, p)] * y[(p, j)];
                    }
                    rhs[i * cw + j] = acc;
                }
            }
            let dim = rh * cw;
            let small = DenseMatrix::from_fn(dim, dim, |row, col| {
                let (i, j) = (row / cw, row % cw);
                let (p, q) = (col / cw, col % cw);
                let delta = if row == col { 1.0 } else { 0.0 };
                delta - t[(ri + i, ri + p)] * s[(cj + q, cj + j)]
            });
            let sol = LuFactor::new(&small)
                .map_err(|_| Error::SingularBlock {
                    row_block: ib + 1,
                    col_block: jb + 1,
                    rows: rh,
                    cols: cw,
                })?
                .solve(&rhs[..dim]);
            for i in 0..rh {
                for j in 0..cw {
                    x[(ri + i, cj + j)] = sol[i * cw + j];
                }
            }
            for i in 0..rh {
                for j in 0..cw {
                    let mut acc = 0.0;
                    for q in 0..cw {
                        acc += sol[i * cw + q] * s[(cj + q, cj + j)];
                    }
                    y[(ri + i, j)] += acc;
                }
            }
        }
    }
    Ok(x)
}

/// Dispatches to one strategy. `Auto` picks the Kronecker oracle when
/// k·n ≤ 2500 and the Schur solver otherwise, then falls back to the
/// remaining methods in order.
pub fn solve_gape_system(
    m: &DenseMatrix,
    n: &DenseMatrix,
    c: &DenseMatrix,
    strategy: Strategy,
) -> Result<(DenseMatrix, SolveReport)> {
    let run = |method: SolveMethod| match method {
        SolveMethod::Kronecker => solve_kronecker(m, n, c),
        SolveMethod::FixedPoint => solve_fixed_point(m, n, c, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER),
        SolveMethod::Schur => solve_schur(m, n, c),
    };
    let order: &[SolveMethod] = match strategy {
        Strategy::Kronecker => return run(SolveMethod::Kronecker),
        Strategy::FixedPoint => return run(SolveMethod::FixedPoint),
        Strategy::Schur => return run(SolveMethod::Schur),
        Strategy::Auto if c.rows() * c.cols() <= AUTO_KRONECKER_MAX_DIM => {
            &[SolveMethod::Kronecker, SolveMethod::Schur, SolveMethod::FixedPoint]
        }
        Strategy::Auto => &[SolveMethod::Schur, SolveMethod::FixedPoint],
    };
    let mut failures = Vec::new();
    for &method in order {
        match run(method) {
            Ok(out) => return Ok(out),
            Err(e @ (Error::Dimension(_) | Error::NotSquare { .. })) => return Err(e),
            Err(e) => failures.push(format!("{method}: {e}")),
        }
    }
    Err(Error::AllStrategiesFailed(failures.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DenseMatrix {
        DenseMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0))
    }

    fn scaled(m: DenseMatrix, target: f64) -> DenseMatrix {
        let rho = spectral_radius(&m, 1e-12, 2000);
        m.scale(target / rho)
    }

    #[test]
    fn zero_operator_returns_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random(&mut rng, 3, 3);
        let c = random(&mut rng, 2, 3);
        let mu = DenseMatrix::zeros(2, 2);
        for (x, _) in [
            solve_kronecker(&mu, &a, &c).unwrap(),
            solve_schur(&mu, &a, &c).unwrap(),
            solve_kronecker(&a.block(0, 0, 2, 2), &DenseMatrix::zeros(3, 3), &c).unwrap(),
        ] {
            assert!(x.max_abs_diff(&c) < 1e-15);
        }
        let (x, rep) = solve_fixed_point(&mu, &a, &c, 1e-10, 10).unwrap();
        assert_eq!(x, c);
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn diagonal_closed_form() {
        let mu = DenseMatrix::from_diag(&[0.5, -0.3, 0.8]);
        let a = DenseMatrix::from_diag(&[0.9, 0.2, -0.7, 0.4]);
        let c = DenseMatrix::from_fn(3, 4, |i, j| 1.0 + i as f64 - j as f64);
        let (x, _) = solve_schur(&mu, &a, &c).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                let expect = c[(i, j)] / (1.0 - mu[(i, i)] * a[(j, j)]);
                assert!((x[(i, j)] - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn three_solvers_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (k, n) in [(2, 3), (4, 8), (5, 6), (1, 9)] {
            let mu = scaled(random(&mut rng, k, k), 0.8);
            let a = scaled(random(&mut rng, n, n), 0.6);
            let c = random(&mut rng, k, n);
            let (xk, _) = solve_kronecker(&mu, &a, &c).unwrap();
            let (xf, rf) = solve_fixed_point(&mu, &a, &c, 1e-13, 10_000).unwrap();
            let (xs, _) = solve_schur(&mu, &a, &c).unwrap();
            assert!(xk.max_abs_diff(&xf) < 1e-9, "k={k} n={n}");
            assert!(xk.max_abs_diff(&xs) < 1e-9, "k={k} n={n}");
            assert!((rf.rho_product - 0.48).abs() < 1e-6);
        }
    }

    #[test]
    fn transposed_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (k, n) in [(3, 5), (6, 4), (1, 1)] {
            let mu = scaled(random(&mut rng, k, k), 0.9);
            let a = scaled(random(&mut rng, n, n), 0.9);
            let g = random(&mut rng, k, n);
            let stein = SchurStein::new(&mu, &a).unwrap();
            let x = stein.solve_transposed(&g).unwrap();
            let (oracle, _) = solve_kronecker(&mu.transpose(), &a.transpose(), &g).unwrap();
            assert!(x.max_abs_diff(&oracle) < 1e-10);
        }
    }

    #[test]
    fn nilpotent_right_factor_converges_with_unit_left_radius() {
        let n = 6;
        let a = DenseMatrix::from_fn(n, n, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
        let th: f64 = 0.7;
        let mu = DenseMatrix::from_rows(&[vec![th.cos(), th.sin()], vec![-th.sin(), th.cos()]]).unwrap();
        let c = DenseMatrix::from_fn(2, n, |i, j| (i + j) as f64);
        let (x, rep) = solve_fixed_point(&mu, &a, &c, 1e-10, 100).unwrap();
        assert!(rep.iterations <= n + 1);
        assert!(rep.residual < 1e-12);
        let (xs, _) = solve_schur(&mu, &a, &c).unwrap();
        assert!(x.max_abs_diff(&xs) < 1e-12);
    }

    #[test]
    fn ill_posed_and_singular() {
        let mu = DenseMatrix::identity(2);
        let a = DenseMatrix::identity(3);
        let c = DenseMatrix::filled(2, 3, 1.0);
        assert!(matches!(solve_fixed_point(&mu, &a, &c, 1e-10, 10), Err(Error::IllPosed { .. })));
        assert!(matches!(solve_kronecker(&mu, &a, &c), Err(Error::SingularSystem { .. })));
        assert!(matches!(solve_schur(&mu, &a, &c), Err(Error::SingularBlock { .. })));
        assert!(matches!(
            solve_gape_system(&mu, &a, &c, Strategy::Auto),
            Err(Error::AllStrategiesFailed(_))
        ));
    }

    #[test]
    fn fixed_point_cap() {
        let mu = DenseMatrix::from_diag(&[0.99]);
        let a = DenseMatrix::from_diag(&[0.99]);
        let c = DenseMatrix::filled(1, 1, 1.0);
        assert!(matches!(
            solve_fixed_point(&mu, &a, &c, 1e-12, 5),
            Err(Error::FixedPointNoConvergence { iterations: 5, .. })
        ));
    }

    #[test]
    fn dispatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let small_mu = scaled(random(&mut rng, 32, 32), 0.5);
        let small_a = scaled(random(&mut rng, 20, 20), 0.5);
        let c = random(&mut rng, 32, 20);
        let (_, rep) = solve_gape_system(&small_mu, &small_a, &c, Strategy::Auto).unwrap();
        assert_eq!(rep.method, SolveMethod::Kronecker);
        let big_a = scaled(random(&mut rng, 100, 100), 0.5);
        let c = random(&mut rng, 32, 100);
        let (_, rep) = solve_gape_system(&small_mu, &big_a, &c, Strategy::Auto).unwrap();
        assert_eq!(rep.method, SolveMethod::Schur);
        assert!(matches!(
            solve_gape_system(&small_mu, &big_a, &DenseMatrix::zeros(3, 3), Strategy::Auto),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [Strategy::Auto, Strategy::Kronecker, Strategy::FixedPoint, Strategy::Schur] {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
        }
        assert!("lu".parse::<Strategy>().is_err());
    }
}
