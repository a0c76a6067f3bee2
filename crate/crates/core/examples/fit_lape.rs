// Fit an automaton so that GAPE reproduces LAPE on a random graph.

use gape_kit::baseline::lape;
use gape_kit::fit::{fit_to_target, FitConfig};
use gape_kit::graph::erdos_renyi;

pub fn run_with(epochs: usize, steps_per_epoch: usize) -> gape_kit::Result<()> {
    let g = erdos_renyi(20, 0.2, 0)?;
    let target = lape(&g, g.n())?;
    let cfg = FitConfig {
        epochs,
        steps_per_epoch,
        ..FitConfig::default()
    };
    let res = fit_to_target(&g, &target, &cfg)?;
    println!("initial MSE {:.3e}", res.initial_mse);
    for (epoch, mse) in res.mse_trace.iter().enumerate() {
        println!("epoch {:>2}: {mse:.3e}", epoch + 1);
    }
    println!("final MSE {:.3e}, |mu|_F = {:.3}", res.final_mse, res.fitted.mu.frobenius());
    Ok(())
}

pub fn run() -> gape_kit::Result<()> {
    run_with(3, 200)
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run_with(10, 1000)
}
