// One-state GAPE over the walk matrix gives personalized PageRank.

use gape_kit::baseline::{gape_as_ppr, ppr_matrix, ppr_series};
use gape_kit::fixtures::fixture;
use gape_kit::graph::walk_matrix;
use gape_kit::sylvester::Strategy;

pub fn run() -> gape_kit::Result<()> {
    for name in ["triangle", "path2", "er10_p04", "cycle7"] {
        let g = fixture(name)?;
        let w = walk_matrix(&g)?;
        for beta in [0.15, 0.5, 0.9] {
            let direct = ppr_matrix(&w, beta)?;
            let gape = gape_as_ppr(&g, beta, Strategy::Schur)?;
            let series = ppr_series(&w, beta, 1e-13)?;
            println!(
                "{name:<9} beta={beta:<4} |gape - direct|={:.1e} |series - direct|={:.1e}",
                gape.max_abs_diff(&direct),
                series.max_abs_diff(&direct)
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
