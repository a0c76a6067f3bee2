// The n-state automaton whose state matrix is the transposed Laplacian
// eigenvector matrix.

use gape_kit::baseline::lape_wgwa_construction;
use gape_kit::fixtures::fixture;

pub fn run() -> gape_kit::Result<()> {
    for name in ["triangle", "cycle7", "hexagon_tail", "molecule29"] {
        let g = fixture(name)?;
        let c = lape_wgwa_construction(&g)?;
        let zero = c.eigenvalues.iter().filter(|l| l.abs() <= 1e-8).count();
        println!(
            "{name:<14} n={:<3} zero eigenvalues={zero} residual={:.2e} (nonzero rows {:.2e})",
            g.n(),
            c.residual,
            c.remark_residual
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
