//! Fitting automaton weights so that the GAPE encoding matches a target
//! encoding, with exact gradients by implicit differentiation.
//!
//! The fit uses one label per node (ℓ = I, so α is k×n). With `P = MPA + αℓ`
//! and `M = μᵀ`, the loss gradient follows from the adjoint equation
//!
//! ```text
//! Λ = Mᵀ Λ Aᵀ + G,    ∂L/∂M = Λ (PA)ᵀ,    ∂L/∂α = Λ ℓᵀ
//! ```
//!
//! where G = ∂L/∂P. Both the forward and the adjoint equation go through the
//! same solver strategy.

use serde::{Deserialize, Serialize};

use crate::encoding::EncodingMatrix;
use crate::error::{Error, Result};
use crate::graph::{label_matrix, LabeledGraph};
use crate::matrix::DenseMatrix;
use crate::numerics::{default_schur_iterations, real_schur, spectral_radius, SchurDecomposition, Tolerances};
use crate::sylvester::{self, SchurStein, Strategy};
use crate::wgwa::{init_damped, Wgwa};

/// ρ(μ)·ρ(A) is pulled back to this value whenever an update reaches it.
pub const PROJECTION_RADIUS: f64 = 1.0 - 1e-3;
/// A loss above this aborts the fit.
pub const DIVERGENCE_LOSS: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    #[default]
    Adam,
    GradientDescent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub epochs: usize,
    pub steps_per_epoch: usize,
    pub lr: f64,
    /// The learning rate is multiplied by this after every epoch.
    pub lr_decay: f64,
    pub seed: u64,
    /// Stop early once the loss is at or below this value (0 disables).
    pub target_tol: f64,
    pub solver_strategy: Strategy,
    pub optimizer: Optimizer,
    /// Damping of the initial μ; `None` means 0.5/ρ(A).
    pub gamma: Option<f64>,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            epochs: 10,
            steps_per_epoch: 1000,
            lr: 3e-3,
            lr_decay: 0.8,
            seed: 0,
            target_tol: 0.0,
            solver_strategy: Strategy::Schur,
            optimizer: Optimizer::Adam,
            gamma: None,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.steps_per_epoch == 0 {
            return Err(Error::InvalidParameter("epochs and steps per epoch must be >= 1".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning rate must be positive, got {}", self.lr)));
        }
        if !(self.lr_decay > 0.0 && self.lr_decay <= 1.0) {
            return Err(Error::InvalidParameter(format!("lr decay must lie in (0, 1], got {}", self.lr_decay)));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!("gamma must be positive, got {g}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub config: FitConfig,
    pub initial_mse: f64,
    /// Loss at the end of each epoch.
    pub mse_trace: Vec<f64>,
    pub final_mse: f64,
    pub steps: usize,
    pub initial: Wgwa,
    pub fitted: Wgwa,
}

/// The serializable part of a [`FitResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub final_mse: f64,
    pub initial_mse: f64,
    pub mse_trace: Vec<f64>,
    pub steps: usize,
    pub mu_frobenius: f64,
    pub config: FitConfig,
}

impl FitResult {
    pub fn summary(&self) -> FitSummary {
        FitSummary {
            final_mse: self.final_mse,
            initial_mse: self.initial_mse,
            mse_trace: self.mse_trace.clone(),
            steps: self.steps,
            mu_frobenius: self.fitted.mu.frobenius(),
            config: self.config.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("fit result serializes")
    }
}

/// ∂L/∂μ and ∂L/∂α.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub mu: DenseMatrix,
    pub alpha: DenseMatrix,
}

/// Mean-squared error between the GAPE encoding of a graph and a fixed target,
/// with the solver state that can be shared across evaluations.
pub struct Objective<'g> {
    graph: &'g LabeledGraph,
    ell: DenseMatrix,
    /// Target transposed to k×n.
    target: DenseMatrix,
    strategy: Strategy,
    adjacency_schur: Option<SchurDecomposition>,
}

impl<'g> Objective<'g> {
    /// `m` is the label count of the automata that will be evaluated.
    pub fn new(graph: &'g LabeledGraph, target: &EncodingMatrix, m: usize, strategy: Strategy) -> Result<Self> {
        if target.nodes() != graph.n() {
            return Err(Error::Dimension(format!(
                "target has {} rows for a {}-node graph",
                target.nodes(),
                graph.n()
            )));
        }
        let adjacency_schur = match strategy {
            Strategy::Schur => Some(real_schur(graph.adjacency(), default_schur_iterations(graph.n()))?),
            _ => None,
        };
        Ok(Objective {
            graph,
            ell: label_matrix(graph, m)?,
            target: target.values.transpose(),
            strategy,
            adjacency_schur,
        })
    }

    fn check(&self, w: &Wgwa) -> Result<()> {
        if w.k() != self.target.rows() || w.m() != self.ell.rows() {
            return Err(Error::Dimension(format!(
                "automaton with k={}, m={} against a target of dimension {} and {} labels",
                w.k(),
                w.m(),
                self.target.rows(),
                self.ell.rows()
            )));
        }
        Ok(())
    }

    fn stein(&self, w: &Wgwa) -> Result<Option<SchurStein>> {
        match &self.adjacency_schur {
            Some(right) => Ok(Some(SchurStein::with_right(
                &w.transition_operator(),
                self.graph.adjacency(),
                right.clone(),
            )?)),
            None => Ok(None),
        }
    }

    fn forward(&self, w: &Wgwa, stein: Option<&SchurStein>) -> Result<DenseMatrix> {
        let c = w.alpha.matmul(&self.ell);
        match stein {
            Some(s) => s.solve(&c),
            None => {
                sylvester::solve_gape_system(&w.transition_operator(), self.graph.adjacency(), &c, self.strategy)
                    .map(|(p, _)| p)
            }
        }
    }

    fn mse(&self, out: &DenseMatrix) -> f64 {
        let count = (out.rows() * out.cols()).max(1) as f64;
        out.sub(&self.target).data().iter().map(|x| x * x).sum::<f64>() / count
    }

    pub fn loss(&self, w: &Wgwa) -> Result<f64> {
        self.check(w)?;
        let stein = self.stein(w)?;
        let p = self.forward(w, stein.as_ref())?;
        Ok(self.mse(&p.hadamard(&w.tau.matmul(&self.ell))))
    }

    pub fn loss_and_grad(&self, w: &Wgwa) -> Result<(f64, Gradient)> {
        self.check(w)?;
        let stein = self.stein(w)?;
        let p = self.forward(w, stein.as_ref())?;
        let tau_ell = w.tau.matmul(&self.ell);
        let out = p.hadamard(&tau_ell);
        let loss = self.mse(&out);

        let count = (out.rows() * out.cols()).max(1) as f64;
        let g = out.sub(&self.target).scale(2.0 / count).hadamard(&tau_ell);
        let lambda = match &stein {
            Some(s) => s.solve_transposed(&g)?,
            None => {
                sylvester::solve_gape_system(&w.mu, &self.graph.adjacency().transpose(), &g, self.strategy)?.0
            }
        };
        let pa = p.matmul(self.graph.adjacency());
        // ∂L/∂μ = (∂L/∂M)ᵀ = PA Λᵀ
        let d_mu = pa.matmul(&lambda.transpose());
        let d_alpha = lambda.matmul(&self.ell.transpose());
        Ok((
            loss,
            Gradient {
                mu: d_mu,
                alpha: d_alpha,
            },
        ))
    }
}

/// MSE between the GAPE encoding and `target`.
pub fn gape_loss(w: &Wgwa, g: &LabeledGraph, target: &EncodingMatrix) -> Result<f64> {
    Objective::new(g, target, w.m(), Strategy::Auto)?.loss(w)
}

/// Exact gradient of [`gape_loss`].
pub fn gape_grad(w: &Wgwa, g: &LabeledGraph, target: &EncodingMatrix) -> Result<Gradient> {
    Objective::new(g, target, w.m(), Strategy::Auto)?
        .loss_and_grad(w)
        .map(|(_, grad)| grad)
}

/// Entrywise |α − targetᵀ|.
pub fn init_target_diff(w: &Wgwa, target: &EncodingMatrix) -> Result<DenseMatrix> {
    let t = target.values.transpose();
    if t.shape() != w.alpha.shape() {
        return Err(Error::Dimension(format!(
            "alpha is {}x{}, transposed target is {}x{}",
            w.alpha.rows(),
            w.alpha.cols(),
            t.rows(),
            t.cols()
        )));
    }
    Ok(w.alpha.sub(&t).map(f64::abs))
}

/// Damping that puts ρ(μ)·ρ(A) at 1/2 for an orthogonal initialization.
pub fn default_gamma(g: &LabeledGraph) -> f64 {
    let rho = adjacency_radius(g);
    if rho > 0.0 {
        0.5 / rho
    } else {
        0.5
    }
}

fn adjacency_radius(g: &LabeledGraph) -> f64 {
    let tol = Tolerances::default();
    spectral_radius(g.adjacency(), tol.spectral_tol, tol.spectral_max_iter)
}

/// Initial automaton for a fit: k = target dimension, one label per node.
pub fn initial_wgwa(g: &LabeledGraph, target: &EncodingMatrix, cfg: &FitConfig) -> Result<Wgwa> {
    let gamma = cfg.gamma.unwrap_or_else(|| default_gamma(g));
    init_damped(target.dim(), g.n(), gamma, cfg.seed)
}

struct Adam {
    t: i32,
    m: Vec<DenseMatrix>,
    v: Vec<DenseMatrix>,
}

impl Adam {
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(shapes: &[(usize, usize)]) -> Self {
        Adam {
            t: 0,
            m: shapes.iter().map(|&(r, c)| DenseMatrix::zeros(r, c)).collect(),
            v: shapes.iter().map(|&(r, c)| DenseMatrix::zeros(r, c)).collect(),
        }
    }

    fn step(&mut self, params: [&mut DenseMatrix; 2], grads: [&DenseMatrix; 2], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - Self::B1.powi(self.t);
        let c2 = 1.0 - Self::B2.powi(self.t);
        for (i, (p, g)) in params.into_iter().zip(grads).enumerate() {
            let (m, v) = (&mut self.m[i], &mut self.v[i]);
            *m = DenseMatrix::from_fn(g.rows(), g.cols(), |r, c| Self::B1 * m[(r, c)] + (1.0 - Self::B1) * g[(r, c)]);
            *v = DenseMatrix::from_fn(g.rows(), g.cols(), |r, c| {
                Self::B2 * v[(r, c)] + (1.0 - Self::B2) * g[(r, c)] * g[(r, c)]
            });
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    let mhat = m[(r, c)] / c1;
                    let vhat = v[(r, c)] / c2;
                    p[(r, c)] -= lr * mhat / (vhat.sqrt() + Self::EPS);
                }
            }
        }
    }
}

/// Fits (μ, α) from a damped orthogonal start so that GAPE reproduces
/// `target`. After every update μ is rescaled if ρ(μ)·ρ(A) reaches
/// [`PROJECTION_RADIUS`], so the fixed point stays well defined.
pub fn fit_to_target(g: &LabeledGraph, target: &EncodingMatrix, cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    let graph = g.with_unique_labels();
    let objective = Objective::new(&graph, target, graph.n(), cfg.solver_strategy)?;
    let rho_a = adjacency_radius(&graph);
    let initial = initial_wgwa(&graph, target, cfg)?;
    let mut w = initial.clone();
    let tol = Tolerances::default();

    let initial_mse = objective.loss(&w)?;
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut adam = Adam::new(&[w.mu.shape(), w.alpha.shape()]);
    let mut step = 0;
    let mut loss = initial_mse;
    let mut lr = cfg.lr;

    'epochs: for _ in 0..cfg.epochs {
        for _ in 0..cfg.steps_per_epoch {
            if cfg.target_tol > 0.0 && loss <= cfg.target_tol {
                break 'epochs;
            }
            let (l, grad) = objective.loss_and_grad(&w).map_err(|e| e.context(format!("fit step {step}")))?;
            if !(l <= DIVERGENCE_LOSS) {
                trace.push(l);
                return Err(Error::Diverged { step, loss: l, trace });
            }
            match cfg.optimizer {
                Optimizer::Adam => adam.step([&mut w.mu, &mut w.alpha], [&grad.mu, &grad.alpha], lr),
                Optimizer::GradientDescent => {
                    w.mu = w.mu.sub(&grad.mu.scale(lr));
                    w.alpha = w.alpha.sub(&grad.alpha.scale(lr));
                }
            }
            let product = spectral_radius(&w.mu, tol.spectral_tol, tol.spectral_max_iter) * rho_a;
            if product >= PROJECTION_RADIUS {
                w.mu = w.mu.scale(PROJECTION_RADIUS / product);
            }
            step += 1;
            loss = l;
        }
        lr *= cfg.lr_decay;
        loss = objective.loss(&w)?;
        if !(loss <= DIVERGENCE_LOSS) {
            trace.push(loss);
            return Err(Error::Diverged { step, loss, trace });
        }
        trace.push(loss);
    }

    let final_mse = objective.loss(&w)?;
    Ok(FitResult {
        config: cfg.clone(),
        initial_mse,
        mse_trace: trace,
        final_mse,
        steps: step,
        initial,
        fitted: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::lape;
    use crate::encoding::Scheme;
    use crate::graph::{cycle_graph, erdos_renyi};
    use crate::wgwa::encode_gape;

    fn target_of(g: &LabeledGraph, w: &Wgwa) -> EncodingMatrix {
        encode_gape(g, w, Strategy::Kronecker).unwrap().0
    }

    #[test]
    fn loss_of_own_output_is_zero_and_offset_gives_square() {
        let g = cycle_graph(5).unwrap().with_unique_labels();
        let w = init_damped(3, 5, 0.3, 1).unwrap();
        let t = target_of(&g, &w);
        assert!(gape_loss(&w, &g, &t).unwrap() < 1e-28);
        let shifted = EncodingMatrix::new(Scheme::Gape, t.values.map(|x| x + 0.25)).unwrap();
        assert!((gape_loss(&w, &g, &shifted).unwrap() - 0.0625).abs() < 1e-14);
        let grad = gape_grad(&w, &g, &t).unwrap();
        assert!(grad.mu.max_abs() < 1e-10 && grad.alpha.max_abs() < 1e-10);
    }

    #[test]
    fn hand_computed_loss_on_two_path() {
        // 1 -> 2, one state, one label: P = [a, μa + a]
        let g = LabeledGraph::new(2, vec![1, 1], &[(0, 1)], true).unwrap();
        let w = Wgwa::new(
            DenseMatrix::filled(1, 1, 2.0),
            DenseMatrix::filled(1, 1, 0.5),
            DenseMatrix::filled(1, 1, 1.0),
        )
        .unwrap();
        let target = EncodingMatrix::new(Scheme::Gape, DenseMatrix::from_vec(2, 1, vec![1.0, 1.0]).unwrap()).unwrap();
        // outputs [2, 3]: ((2-1)^2 + (3-1)^2) / 2
        assert!((gape_loss(&w, &g, &target).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences_on_every_path() {
        let g = erdos_renyi(6, 0.5, 3).unwrap().with_unique_labels();
        let w = init_damped(4, 6, 0.2, 7).unwrap();
        let target = EncodingMatrix::new(Scheme::Lape, DenseMatrix::from_fn(6, 4, |i, j| ((i * 4 + j) as f64).cos()))
            .unwrap();
        let h = 1e-5;
        for strategy in [Strategy::Kronecker, Strategy::Schur, Strategy::FixedPoint] {
            let obj = Objective::new(&g, &target, 6, strategy).unwrap();
            let (_, grad) = obj.loss_and_grad(&w).unwrap();
            let mut worst: f64 = 0.0;
            for which in 0..2 {
                let (rows, cols) = if which == 0 { w.mu.shape() } else { w.alpha.shape() };
                let analytic = if which == 0 { &grad.mu } else { &grad.alpha };
                let mut err: f64 = 0.0;
                for r in 0..rows {
                    for c in 0..cols {
                        let bump = |d: f64| {
                            let mut x = w.clone();
                            let target = if which == 0 { &mut x.mu } else { &mut x.alpha };
                            target[(r, c)] += d;
                            obj.loss(&x).unwrap()
                        };
                        let fd = (bump(h) - bump(-h)) / (2.0 * h);
                        err = err.max((fd - analytic[(r, c)]).abs());
                    }
                }
                worst = worst.max(err / analytic.max_abs());
            }
            assert!(worst < 1e-4, "{strategy}: relative error {worst:e}");
        }
    }

    #[test]
    fn zero_transitions_decouple_alpha_gradient() {
        let g = cycle_graph(4).unwrap().with_unique_labels();
        let mut w = init_damped(2, 4, 0.1, 0).unwrap();
        w.mu = DenseMatrix::zeros(2, 2);
        let target = EncodingMatrix::new(Scheme::Gape, DenseMatrix::filled(4, 2, 0.3)).unwrap();
        let grad = gape_grad(&w, &g, &target).unwrap();
        // P = α, so ∂L/∂α = 2(α − targetᵀ)/(nk)
        let expect = w.alpha.sub(&target.values.transpose()).scale(2.0 / 8.0);
        assert!(grad.alpha.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn short_fit_reduces_loss_and_is_deterministic() {
        let g = erdos_renyi(10, 0.4, 1).unwrap();
        let target = lape(&g, 10).unwrap();
        let cfg = FitConfig {
            epochs: 3,
            steps_per_epoch: 200,
            ..FitConfig::default()
        };
        let a = fit_to_target(&g, &target, &cfg).unwrap();
        assert!(a.final_mse * 10.0 < a.initial_mse, "{} -> {}", a.initial_mse, a.final_mse);
        assert_eq!(a.mse_trace.len(), 3);
        let b = fit_to_target(&g, &target, &cfg).unwrap();
        assert_eq!(a.mse_trace, b.mse_trace);
        assert_eq!(a.fitted, b.fitted);
        let rho_a = adjacency_radius(&g);
        assert!(spectral_radius(&a.fitted.mu, 1e-12, 1000) * rho_a < 1.0);
    }

    #[test]
    fn target_tolerance_stops_immediately_at_a_perfect_start() {
        let g = cycle_graph(5).unwrap();
        let cfg = FitConfig {
            target_tol: 1e-20,
            ..FitConfig::default()
        };
        let w = initial_wgwa(&g.with_unique_labels(), &EncodingMatrix::new(Scheme::Gape, DenseMatrix::zeros(5, 5)).unwrap(), &cfg).unwrap();
        let target = target_of(&g.with_unique_labels(), &w);
        let r = fit_to_target(&g, &target, &cfg).unwrap();
        assert_eq!(r.steps, 0);
        assert!(r.final_mse < 1e-20);
    }

    #[test]
    fn config_validation_and_diff() {
        let bad = FitConfig {
            epochs: 0,
            ..FitConfig::default()
        };
        assert!(bad.validate().is_err());
        let w = init_damped(3, 3, 0.5, 0).unwrap();
        let t = EncodingMatrix::new(Scheme::Lape, w.alpha.transpose()).unwrap();
        assert_eq!(init_target_diff(&w, &t).unwrap().max_abs(), 0.0);
        let t2 = EncodingMatrix::new(Scheme::Lape, DenseMatrix::zeros(3, 2)).unwrap();
        assert!(init_target_diff(&w, &t2).is_err());
    }
}
