// Solve one GAPE system `P = μᵀ P A + α ℓ` with every strategy.

use gape_kit::graph::{erdos_renyi, label_matrix};
use gape_kit::sylvester::{solve_gape_system, Strategy};
use gape_kit::wgwa::init_damped;

pub fn run() -> gape_kit::Result<()> {
    let g = erdos_renyi(25, 0.2, 3)?;
    let w = init_damped(8, 1, 0.1, 7)?;
    let m = w.transition_operator();
    let c = w.alpha.matmul(&label_matrix(&g, 1)?);

    let mut solutions = Vec::new();
    for strategy in [Strategy::Kronecker, Strategy::FixedPoint, Strategy::Schur, Strategy::Auto] {
        let (p, report) = solve_gape_system(&m, g.adjacency(), &c, strategy)?;
        println!(
            "{:<12} -> {:<12} residual={:.2e} iterations={:<4} rho(mu)rho(A)={:.3}",
            strategy.as_str(),
            report.method.as_str(),
            report.residual,
            report.iterations,
            report.rho_product
        );
        solutions.push(p);
    }
    let spread = solutions
        .iter()
        .flat_map(|a| solutions.iter().map(move |b| a.max_abs_diff(b)))
        .fold(0.0, f64::max);
    println!("largest pairwise difference {spread:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
