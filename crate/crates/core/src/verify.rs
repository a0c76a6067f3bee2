//! Built-in equivalence checks, runnable from the `verify` command.
//!
//! Each suite produces named [`Check`]s. Suites run on separate threads and the
//! combined report is sorted by check name, so output does not depend on
//! scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::baseline::{
    gape_as_ppr, lape_wgwa_construction, minmax_columns, ppr_matrix, ppr_series, pprp_encoding, reference_sinusoidal,
    rw_encoding,
};
use crate::compare::{per_column_pearson, per_node_pearson};
use crate::error::{Error, Result};
use crate::fixtures::fixture;
use crate::graph::walk_matrix;
use crate::matrix::DenseMatrix;
use crate::numerics::spectral_radius;
use crate::sylvester::{
    self, residual, solve_fixed_point, solve_kronecker, solve_schur, Strategy, FIXED_POINT_MAX_ITER,
    FIXED_POINT_TOL,
};
use crate::wgwa::encode_sinusoidal_via_wgwa;

pub const PROP1_LENGTHS: &[usize] = &[1, 10, 50, 200];
pub const PROP1_DIMS: &[usize] = &[4, 64, 512];
pub const PROP1_TOL: f64 = 1e-6;

pub const LAPE_REMARK_FIXTURES: &[&str] = &[
    "cycle7",
    "er10_p04",
    "fused_hexagons",
    "hexagon_pentagon",
    "hexagon_tail",
    "hexagon_triangle",
    "molecule29",
    "path2",
    "triangle",
];
pub const LAPE_REMARK_TOL: f64 = 1e-7;

pub const PPR_FIXTURES: &[&str] = &["triangle", "path2", "er10_p04", "cycle7"];
pub const PPR_BETAS: &[f64] = &[0.15, 0.5, 0.9];
pub const PPR_TOL: f64 = 1e-8;
pub const PPR_SERIES_TOL: f64 = 1e-9;
/// Neumann tail bound handed to the series oracle.
const PPR_SERIES_TAIL: f64 = 1e-13;

pub const SOLVER_INSTANCES: u64 = 100;
pub const SOLVER_AGREEMENT_TOL: f64 = 1e-7;
pub const SOLVER_RESIDUAL_TOL: f64 = 1e-6;
pub const SOLVER_MAX_RHO: f64 = 0.9;
/// The fixed-point iterate is stopped tighter than the default so the
/// truncation error stays well below the agreement tolerance.
const SOLVER_FIXED_POINT_TOL: f64 = FIXED_POINT_TOL * 1e-3;

pub const PPRP_RW_FIXTURES: &[&str] = &["fused_hexagons", "hexagon_pentagon", "hexagon_tail"];
pub const PPRP_RW_BETA: f64 = 0.9;
pub const PPRP_RW_K: usize = 6;
pub const PPRP_RW_MIN_PEARSON: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Prop1,
    LapeRemark,
    PprK1,
    Solvers,
    PprpRw,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 5] = [Suite::Prop1, Suite::LapeRemark, Suite::PprK1, Suite::Solvers, Suite::PprpRw];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Prop1 => "prop1",
            Suite::LapeRemark => "lape_remark",
            Suite::PprK1 => "ppr_k1",
            Suite::Solvers => "solvers",
            Suite::PprpRw => "pprp_rw",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::INDIVIDUAL)
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown verify suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured statistic (deviation, residual or correlation).
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value <= bound`.
    fn at_most(name: String, value: f64, bound: f64, detail: String) -> Self {
        Check {
            passed: value <= bound,
            name,
            value,
            bound,
            detail,
        }
    }

    /// Passes when `value >= bound`.
    fn at_least(name: String, value: f64, bound: f64, detail: String) -> Self {
        Check {
            passed: value >= bound,
            name,
            value,
            bound,
            detail,
        }
    }

    fn errored(name: String, err: &Error) -> Self {
        Check {
            name,
            passed: false,
            value: f64::NAN,
            bound: f64::NAN,
            detail: err.to_string(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} value={:e} bound={:e}", self.name, self.value, self.bound)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Runs a suite (or all of them, one thread per suite).
pub fn run(suite: Suite) -> Report {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::INDIVIDUAL.to_vec(),
        one => vec![one],
    };
    let mut checks: Vec<Check> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|&s| scope.spawn(move || run_one(s))).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verify suite panicked"))
            .collect()
    });
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Report { checks }
}

fn run_one(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::All => unreachable!("expanded by run"),
        Suite::Prop1 => prop1(),
        Suite::LapeRemark => lape_remark(),
        Suite::PprK1 => ppr_k1(),
        Suite::Solvers => solvers(),
        Suite::PprpRw => pprp_rw(),
    }
}

fn prop1() -> Vec<Check> {
    let mut out = Vec::new();
    for &len in PROP1_LENGTHS {
        for &k in PROP1_DIMS {
            let name = format!("prop1/len={len:03},k={k:03}");
            let dev = encode_sinusoidal_via_wgwa(len, k)
                .and_then(|a| Ok(a.values.max_abs_diff(&reference_sinusoidal(len, k)?.values)));
            out.push(match dev {
                Ok(d) => Check::at_most(name, d, PROP1_TOL, String::new()),
                Err(e) => Check::errored(name, &e),
            });
        }
    }
    out
}

fn lape_remark() -> Vec<Check> {
    let mut out = Vec::new();
    for &fx in LAPE_REMARK_FIXTURES {
        let name = format!("lape_remark/{fx}");
        match fixture(fx).and_then(|g| lape_wgwa_construction(&g)) {
            Ok(c) => out.push(Check::at_most(
                name,
                c.residual.max(c.remark_residual),
                LAPE_REMARK_TOL,
                format!("{} states", c.eigenvalues.len()),
            )),
            Err(e) => out.push(Check::errored(name, &e)),
        }
    }
    out
}

fn ppr_k1() -> Vec<Check> {
    let mut out = Vec::new();
    for &fx in PPR_FIXTURES {
        for &beta in PPR_BETAS {
            let name = format!("ppr_k1/{fx}/beta={beta}");
            let result = fixture(fx).and_then(|g| {
                let direct = ppr_matrix(&walk_matrix(&g)?, beta)?;
                let mut gape_dev: f64 = 0.0;
                for strategy in [Strategy::Kronecker, Strategy::Schur, Strategy::FixedPoint] {
                    gape_dev = gape_dev.max(gape_as_ppr(&g, beta, strategy)?.max_abs_diff(&direct));
                }
                let series = ppr_series(&walk_matrix(&g)?, beta, PPR_SERIES_TAIL)?;
                Ok((gape_dev, series.max_abs_diff(&direct)))
            });
            match result {
                Ok((gape_dev, series_dev)) => {
                    out.push(Check::at_most(name.clone(), gape_dev, PPR_TOL, "worst of kronecker, schur, fixed-point vs direct".into()));
                    out.push(Check::at_most(
                        format!("{name}/series"),
                        series_dev,
                        PPR_SERIES_TOL,
                        "series vs direct".into(),
                    ));
                }
                Err(e) => out.push(Check::errored(name, &e)),
            }
        }
    }
    out
}

/// A random GAPE system `P = μᵀ P A + C` with ρ(μ)·ρ(A) = `rho_product`.
#[derive(Debug, Clone)]
pub struct SolverInstance {
    pub seed: u64,
    pub mu: DenseMatrix,
    pub a: DenseMatrix,
    pub c: DenseMatrix,
    pub rho_product: f64,
}

impl SolverInstance {
    pub fn left(&self) -> DenseMatrix {
        self.mu.transpose()
    }
}

/// Draws n ≤ 30 nodes, k ≤ 8 states, a directed 0/1 adjacency, Gaussian μ
/// rescaled to a target ρ(μ)·ρ(A) ≤ 0.9 and `C = α ℓ` from random labels.
pub fn random_solver_instance(seed: u64) -> SolverInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=30);
    let k = rng.random_range(1..=8);
    let m = rng.random_range(1..=4);
    let p: f64 = rng.random_range(0.05..0.6);
    let a = DenseMatrix::from_fn(n, n, |i, j| if i != j && rng.random_bool(p) { 1.0 } else { 0.0 });
    let mut mu = DenseMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let target = rng.random_range(0.05..SOLVER_MAX_RHO);
    let tol = crate::numerics::Tolerances::default();
    let rho_a = spectral_radius(&a, tol.spectral_tol, tol.spectral_max_iter);
    let rho_mu = spectral_radius(&mu, tol.spectral_tol, tol.spectral_max_iter);
    if rho_a > 0.0 && rho_mu > 0.0 {
        mu = mu.scale(target / (rho_a * rho_mu));
    }
    let alpha = DenseMatrix::from_fn(k, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let ell = DenseMatrix::from_fn(m, n, {
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
        move |l, v| if labels[v] == l { 1.0 } else { 0.0 }
    });
    let rho_product = sylvester::rho_product(&mu, &a);
    SolverInstance {
        seed,
        c: alpha.matmul(&ell),
        mu,
        a,
        rho_product,
    }
}

/// Worst pairwise deviation and worst residual (relative to max(1, ‖C‖_max))
/// of the three solvers on one instance.
pub fn solver_agreement(inst: &SolverInstance) -> Result<(f64, f64)> {
    let left = inst.left();
    let (kron, _) = solve_kronecker(&left, &inst.a, &inst.c)?;
    let (fixed, _) = solve_fixed_point(&left, &inst.a, &inst.c, SOLVER_FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)?;
    let (schur, _) = solve_schur(&left, &inst.a, &inst.c)?;
    let dev = kron
        .max_abs_diff(&fixed)
        .max(kron.max_abs_diff(&schur))
        .max(fixed.max_abs_diff(&schur));
    let res = [&kron, &fixed, &schur]
        .iter()
        .map(|x| residual(&left, &inst.a, &inst.c, x) / inst.c.max_abs().max(1.0))
        .fold(0.0, f64::max);
    Ok((dev, res))
}

fn solvers() -> Vec<Check> {
    let mut worst_dev = (0.0, 0);
    let mut worst_res = (0.0, 0);
    let mut errors = Vec::new();
    for seed in 0..SOLVER_INSTANCES {
        let inst = random_solver_instance(seed);
        match solver_agreement(&inst) {
            Ok((dev, res)) => {
                if dev > worst_dev.0 {
                    worst_dev = (dev, seed);
                }
                if res > worst_res.0 {
                    worst_res = (res, seed);
                }
            }
            Err(e) => errors.push(Check::errored(format!("solvers/instance_{seed:03}"), &e)),
        }
    }
    let mut out = vec![
        Check::at_most(
            "solvers/pairwise_deviation".into(),
            worst_dev.0,
            SOLVER_AGREEMENT_TOL,
            format!("{SOLVER_INSTANCES} instances, worst seed {}", worst_dev.1),
        ),
        Check::at_most(
            "solvers/residual".into(),
            worst_res.0,
            SOLVER_RESIDUAL_TOL,
            format!("scaled by max(1, |C|max), worst seed {}", worst_res.1),
        ),
    ];
    out.extend(errors);
    out
}

fn pprp_rw() -> Vec<Check> {
    let mut out = Vec::new();
    for &fx in PPRP_RW_FIXTURES {
        let name = format!("pprp_rw/{fx}");
        let result = fixture(fx).and_then(|g| {
            let rw = minmax_columns(&rw_encoding(&g, PPRP_RW_K)?.values);
            let pprp = minmax_columns(&pprp_encoding(&g, PPRP_RW_BETA, PPRP_RW_K)?.values);
            let cols: Vec<f64> = per_column_pearson(&rw, &pprp).into_iter().flatten().collect();
            let nodes: Vec<f64> = per_node_pearson(&rw, &pprp).into_iter().flatten().collect();
            Ok((cols, nodes))
        });
        match result {
            Ok((cols, nodes)) => {
                let min_col = cols.iter().copied().fold(f64::INFINITY, f64::min);
                let min_node = nodes.iter().copied().fold(f64::INFINITY, f64::min);
                let mut check = Check::at_least(
                    name,
                    min_col,
                    PPRP_RW_MIN_PEARSON,
                    format!(
                        "min per-column pearson over {} defined columns, beta={PPRP_RW_BETA}; min per-node {min_node:.3}",
                        cols.len()
                    ),
                );
                check.passed &= !cols.is_empty();
                out.push(check);
            }
            Err(e) => out.push(Check::errored(name, &e)),
        }
    }
    out
}
