use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LabeledGraph;
use crate::error::{Error, Result};

/// Directed path `1 → 2 → … → length`, node 1 labelled 1 and the rest 2.
pub fn string_graph(length: usize) -> Result<LabeledGraph> {
    if length == 0 {
        return Err(Error::InvalidParameter("string graph needs length >= 1".into()));
    }
    let labels = (0..length).map(|i| if i == 0 { 1 } else { 2 }).collect();
    let edges: Vec<_> = (1..length).map(|i| (i - 1, i)).collect();
    LabeledGraph::new(length, labels, &edges, true)
}

/// Undirected n-cycle, all labels 1.
pub fn cycle_graph(n: usize) -> Result<LabeledGraph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle graph needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    LabeledGraph::new(n, vec![1; n], &edges, false)
}

/// G(n, p): every unordered pair joined independently with probability `p`.
/// Deterministic for a given seed.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<LabeledGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    LabeledGraph::new(n, vec![1; n], &edges, false)
}

/// Circular skip-link graph: the n-cycle plus chords `i - i+skip (mod n)`.
///
/// Only skips that keep the graph simple and 4-regular are accepted, which
/// excludes skip ≡ 0, ±1 and n/2 (mod n).
pub fn csl_graph(n: usize, skip: usize) -> Result<LabeledGraph> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!("CSL graph needs n >= 5, got {n}")));
    }
    let s = skip % n;
    if s == 0 || s == 1 || s == n - 1 {
        return Err(Error::InvalidParameter(format!(
            "skip {skip} coincides with a cycle edge or a self-loop for n = {n}"
        )));
    }
    if 2 * s == n {
        return Err(Error::InvalidParameter(format!(
            "skip {skip} = n/2 pairs chords up and leaves a 3-regular graph"
        )));
    }
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n).map(|i| (i, (i + s) % n)));
    LabeledGraph::new(n, vec![1; n], &edges, false)
}
