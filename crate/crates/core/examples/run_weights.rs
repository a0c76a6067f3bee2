// Sum run weights over every run ending at a node and compare with the
// solved state matrix.

use gape_kit::graph::string_graph;
use gape_kit::sylvester::Strategy;
use gape_kit::wgwa::{gape_state_matrix, init_damped, run_weight, Wgwa};
use gape_kit::DenseMatrix;

/// Total weight of runs that end in state `q` at node `v`, with τ ignored.
fn enumerated(w: &Wgwa, g: &gape_kit::graph::LabeledGraph, q: usize, v: usize) -> gape_kit::Result<f64> {
    let untimed = Wgwa::new(w.alpha.clone(), w.mu.clone(), DenseMatrix::filled(w.k(), w.m(), 1.0))?;
    // on a directed path the only node sequence ending at v starts at some u ≤ v
    let mut total = 0.0;
    for start in 0..=v {
        let len = v - start + 1;
        let mut states = vec![0usize; len];
        loop {
            if states[len - 1] == q {
                let configs: Vec<(usize, usize)> = states.iter().zip(start..=v).map(|(&s, n)| (s, n)).collect();
                total += run_weight(g, &untimed, &configs)?;
            }
            let Some(i) = states.iter().rposition(|&s| s + 1 < w.k()) else { break };
            states[i] += 1;
            states[i + 1..].iter_mut().for_each(|s| *s = 0);
        }
    }
    Ok(total)
}

pub fn run() -> gape_kit::Result<()> {
    let g = string_graph(5)?;
    let w = init_damped(3, 2, 0.8, 11)?;
    let (p, _) = gape_state_matrix(&g, &w, Strategy::FixedPoint)?;
    let mut worst: f64 = 0.0;
    for q in 0..w.k() {
        for v in 0..g.n() {
            worst = worst.max((enumerated(&w, &g, q, v)? - p[(q, v)]).abs());
        }
    }
    println!("{} states x {} nodes, largest |enumerated - solved| = {worst:.2e}", w.k(), g.n());
    assert!(worst <= 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
