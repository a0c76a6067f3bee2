//! Weighted graph-walking automata and the encodings they induce.
//!
//! A [`Wgwa`] with k states over m labels carries initial weights `alpha`
//! (k×m), transition weights `mu` (k×k) and final weights `tau` (k×m).
//! `mu[(q, r)]` is the weight of moving from state q to state r, so the total
//! run weight into every (state, node) pair solves
//!
//! ```text
//! P = μᵀ · P · A + α · ℓ        P ∈ R^{k×n}
//! ```
//!
//! and the encoding of node v is `P[:, v] ∘ (τℓ)[:, v]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::encoding::{EncodingMatrix, Scheme};
use crate::error::{Error, Result};
use crate::graph::{label_matrix, string_graph, LabeledGraph};
use crate::matrix::DenseMatrix;
use crate::sylvester::{self, SolveReport, Strategy};

#[derive(Debug, Clone, PartialEq)]
pub struct Wgwa {
    pub alpha: DenseMatrix,
    pub mu: DenseMatrix,
    pub tau: DenseMatrix,
}

impl Wgwa {
    pub fn new(alpha: DenseMatrix, mu: DenseMatrix, tau: DenseMatrix) -> Result<Self> {
        let k = mu.rows();
        if !mu.is_square() {
            return Err(Error::NotSquare {
                rows: mu.rows(),
                cols: mu.cols(),
            });
        }
        if alpha.rows() != k || tau.shape() != alpha.shape() {
            return Err(Error::Dimension(format!(
                "alpha {}x{}, mu {k}x{k}, tau {}x{}",
                alpha.rows(),
                alpha.cols(),
                tau.rows(),
                tau.cols()
            )));
        }
        if !(alpha.is_finite() && mu.is_finite() && tau.is_finite()) {
            return Err(Error::InvalidParameter("automaton weights must be finite".into()));
        }
        Ok(Wgwa { alpha, mu, tau })
    }

    /// Number of states.
    pub fn k(&self) -> usize {
        self.mu.rows()
    }

    /// Number of labels.
    pub fn m(&self) -> usize {
        self.alpha.cols()
    }

    /// Left factor of the fixed-point equation, `μᵀ`.
    pub fn transition_operator(&self) -> DenseMatrix {
        self.mu.transpose()
    }

    pub fn scale_alpha(&self, s: f64) -> Self {
        Wgwa {
            alpha: self.alpha.scale(s),
            ..self.clone()
        }
    }

    /// Row-wise softmax on μ (the undamped variant).
    pub fn with_row_softmax_mu(&self) -> Self {
        Wgwa {
            mu: row_softmax(&self.mu),
            ..self.clone()
        }
    }

    /// Column-wise softmax on α.
    pub fn with_column_softmax_alpha(&self) -> Self {
        Wgwa {
            alpha: row_softmax(&self.alpha.transpose()).transpose(),
            ..self.clone()
        }
    }
}

fn row_softmax(m: &DenseMatrix) -> DenseMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let row = out.row_mut(i);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for x in row.iter_mut() {
            *x = (*x - max).exp();
            sum += *x;
        }
        row.iter_mut().for_each(|x| *x /= sum);
    }
    out
}

/// Haar-distributed orthogonal matrix: the Q factor of a Gaussian matrix,
/// normalized so that R has a positive diagonal (Gram-Schmidt gives that
/// directly).
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let g = DenseMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| g.col(j)).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        // second pass restores orthogonality lost to cancellation
        for _ in 0..2 {
            for q in done.iter() {
                let dot: f64 = q.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                col.iter_mut().zip(q).for_each(|(x, qi)| *x -= dot * qi);
            }
        }
        let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
        col.iter_mut().for_each(|x| *x /= norm);
    }
    DenseMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Orthogonal initialization with damping: μ = γ·(random orthogonal k×k),
/// α = the leading k×m block of a random orthogonal max(k, m)-square matrix,
/// τ = all ones. Deterministic in `seed`.
pub fn init_damped(k: usize, m: usize, gamma: f64, seed: u64) -> Result<Wgwa> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!("need k, m >= 1, got k={k}, m={m}")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("damping factor must be positive, got {gamma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mu = random_orthogonal(k, &mut rng).scale(gamma);
    let alpha = random_orthogonal(k.max(m), &mut rng).block(0, 0, k, m);
    Wgwa::new(alpha, mu, DenseMatrix::filled(k, m, 1.0))
}

/// Total run weight `P` (k×n, before the τ Hadamard product).
pub fn gape_state_matrix(g: &LabeledGraph, w: &Wgwa, strategy: Strategy) -> Result<(DenseMatrix, SolveReport)> {
    let ell = label_matrix(g, w.m())?;
    let c = w.alpha.matmul(&ell);
    sylvester::solve_gape_system(&w.transition_operator(), g.adjacency(), &c, strategy)
}

/// GAPE encoding: row v is `P[:, v] ∘ (τℓ)[:, v]`.
pub fn encode_gape(g: &LabeledGraph, w: &Wgwa, strategy: Strategy) -> Result<(EncodingMatrix, SolveReport)> {
    let ctx = || format!("GAPE with k={} on a {}-node graph", w.k(), g.n());
    let (p, report) = gape_state_matrix(g, w, strategy).map_err(|e| e.context(ctx()))?;
    let tau_ell = w.tau.matmul(&label_matrix(g, w.m())?);
    let values = p.hadamard(&tau_ell).transpose();
    let enc = EncodingMatrix::new(Scheme::Gape, values)?.with_meta(|m| m.solver = Some(report));
    Ok((enc, report))
}

/// Weight of one run `(q₁, v₁), …, (q_T, v_T)` given as 0-indexed
/// `(state, node)` pairs: `α[q₁, ℓ(v₁)] · Π μ[q_t, q_{t+1}] · τ[q_T, ℓ(v_T)]`.
/// Every step must follow an edge `v_t → v_{t+1}`.
pub fn run_weight(g: &LabeledGraph, w: &Wgwa, configs: &[(usize, usize)]) -> Result<f64> {
    let (&(q1, v1), &(qt, vt)) = match (configs.first(), configs.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter("a run needs at least one configuration".into())),
    };
    for &(q, v) in configs {
        if q >= w.k() || v >= g.n() {
            return Err(Error::InvalidParameter(format!(
                "configuration (state {}, node {}) out of range",
                q + 1,
                v + 1
            )));
        }
    }
    let label = |v: usize| -> Result<usize> {
        let l = g.label(v);
        if l > w.m() {
            return Err(Error::LabelOutOfRange {
                node: v + 1,
                label: l,
                labels: w.m(),
            });
        }
        Ok(l - 1)
    };
    let mut weight = w.alpha[(q1, label(v1)?)];
    for (step, pair) in configs.windows(2).enumerate() {
        let ((q, u), (r, v)) = (pair[0], pair[1]);
        if !g.has_edge(u, v) {
            return Err(Error::InvalidRun {
                step: step + 1,
                from: u + 1,
                to: v + 1,
            });
        }
        weight *= w.mu[(q, r)];
    }
    Ok(weight * w.tau[(qt, label(vt)?)])
}

/// Rotation frequencies `θ_j = −10000^{−2(j−1)/k}` for j = 1..=k/2.
pub fn sinusoidal_angles(k: usize) -> Vec<f64> {
    (0..k / 2)
        .map(|j| -(10000f64.powf(-2.0 * j as f64 / k as f64)))
        .collect()
}

/// Two-label automaton whose encoding on a string graph is the sinusoidal
/// encoding: μ is block-diagonal with blocks `[cos θ, sin θ; −sin θ, cos θ]`,
/// α has ones at rows 2, 4, … of its first column, τ is all ones.
pub fn sinusoidal_wgwa(k: usize) -> Result<Wgwa> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidParameter(format!("sinusoidal automaton needs even k >= 2, got {k}")));
    }
    let mut mu = DenseMatrix::zeros(k, k);
    for (j, th) in sinusoidal_angles(k).into_iter().enumerate() {
        let (s, c) = th.sin_cos();
        let b = 2 * j;
        mu[(b, b)] = c;
        mu[(b, b + 1)] = s;
        mu[(b + 1, b)] = -s;
        mu[(b + 1, b + 1)] = c;
    }
    let mut alpha = DenseMatrix::zeros(k, 2);
    for i in (1..k).step_by(2) {
        alpha[(i, 0)] = 1.0;
    }
    Wgwa::new(alpha, mu, DenseMatrix::filled(k, 2, 1.0))
}

/// Sinusoidal encoding computed as GAPE on the string graph of the given
/// length. The path adjacency is nilpotent, so the fixed-point iteration
/// terminates exactly even though ρ(μ) = 1.
pub fn encode_sinusoidal_via_wgwa(length: usize, k: usize) -> Result<EncodingMatrix> {
    let g = string_graph(length)?;
    let w = sinusoidal_wgwa(k)?;
    let (enc, _) = encode_gape(&g, &w, Strategy::FixedPoint)?;
    Ok(EncodingMatrix {
        scheme: Scheme::Sinusoidal,
        ..enc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;
    use crate::numerics::spectral_radius;

    #[test]
    fn orthogonal_init() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_orthogonal(7, &mut rng);
        assert!(q.transpose().matmul(&q).max_abs_diff(&DenseMatrix::identity(7)) < 1e-13);

        let w = init_damped(32, 5, 0.02, 9).unwrap();
        assert_eq!((w.k(), w.m()), (32, 5));
        assert!((spectral_radius(&w.mu, 1e-12, 500) - 0.02).abs() < 1e-6);
        let ata = w.alpha.transpose().matmul(&w.alpha);
        assert!(ata.max_abs_diff(&DenseMatrix::identity(5)) < 1e-12);
        assert_eq!(w, init_damped(32, 5, 0.02, 9).unwrap());
        assert_ne!(w, init_damped(32, 5, 0.02, 10).unwrap());

        let wide = init_damped(3, 8, 0.5, 1).unwrap();
        let aat = wide.alpha.matmul(&wide.alpha.transpose());
        assert!(aat.max_abs_diff(&DenseMatrix::identity(3)) < 1e-12);
        assert!(init_damped(3, 3, 0.0, 1).is_err());
        assert!(init_damped(0, 3, 0.1, 1).is_err());
    }

    #[test]
    fn zero_transitions_give_alpha_columns() {
        let g = cycle_graph(5).unwrap().with_labels(vec![1, 2, 1, 3, 2]).unwrap();
        let mut w = init_damped(4, 3, 0.1, 2).unwrap();
        w.mu = DenseMatrix::zeros(4, 4);
        w.tau = DenseMatrix::from_fn(4, 3, |i, j| (1 + i + j) as f64);
        let (enc, _) = encode_gape(&g, &w, Strategy::Auto).unwrap();
        for v in 0..5 {
            let l = g.label(v) - 1;
            for q in 0..4 {
                assert_eq!(enc.values[(v, q)], w.alpha[(q, l)] * w.tau[(q, l)]);
            }
        }
    }

    #[test]
    fn label_beyond_alphabet_is_rejected() {
        let g = cycle_graph(3).unwrap().with_labels(vec![1, 2, 3]).unwrap();
        let w = init_damped(2, 2, 0.1, 0).unwrap();
        assert!(matches!(
            encode_gape(&g, &w, Strategy::Auto).map_err(|e| e.root().to_string()),
            Err(msg) if msg.contains("label 3")
        ));
    }

    #[test]
    fn run_weights() {
        let g = string_graph(2).unwrap();
        let alpha = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let mu = DenseMatrix::from_rows(&[vec![0.5, -1.0], vec![0.25, 2.0]]).unwrap();
        let tau = DenseMatrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]]).unwrap();
        let w = Wgwa::new(alpha, mu, tau).unwrap();
        // length 1: alpha[q, label] * tau[q, label]
        assert_eq!(run_weight(&g, &w, &[(1, 1)]).unwrap(), 4.0 * 8.0);
        // (state 1, node 1) -> (state 2, node 2): alpha[0,0] * mu[0,1] * tau[1,1]
        assert_eq!(run_weight(&g, &w, &[(0, 0), (1, 1)]).unwrap(), 1.0 * -1.0 * 8.0);
        assert!(matches!(
            run_weight(&g, &w, &[(0, 1), (0, 0)]),
            Err(Error::InvalidRun { step: 1, from: 2, to: 1 })
        ));
        assert!(run_weight(&g, &w, &[]).is_err());
    }

    #[test]
    fn sinusoidal_automaton_shape() {
        let w = sinusoidal_wgwa(4).unwrap();
        let th = sinusoidal_angles(4);
        assert_eq!(th[0], -1.0);
        assert!((th[1] + 0.01).abs() < 1e-15);
        assert_eq!(w.mu[(0, 1)], th[0].sin());
        assert_eq!(w.mu[(3, 2)], -th[1].sin());
        assert_eq!(w.mu[(0, 2)], 0.0);
        assert_eq!(w.alpha.col(0), vec![0.0, 1.0, 0.0, 1.0]);
        assert_eq!(w.alpha.col(1), vec![0.0; 4]);
        assert!(sinusoidal_wgwa(5).is_err());
        assert!(sinusoidal_wgwa(0).is_err());
    }

    #[test]
    fn first_position_alternates() {
        let enc = encode_sinusoidal_via_wgwa(3, 6).unwrap();
        assert_eq!(enc.row(0), &[0.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!((enc.values[(1, 0)] - 1f64.sin()).abs() < 1e-15);
        assert!((enc.values[(1, 1)] - 1f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn softmax_variants() {
        let w = init_damped(3, 2, 0.5, 4).unwrap();
        let s = w.with_row_softmax_mu();
        for i in 0..3 {
            assert!((s.mu.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        let a = w.with_column_softmax_alpha();
        for j in 0..2 {
            assert!((a.alpha.col(j).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }
}
