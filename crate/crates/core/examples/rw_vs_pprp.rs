// Correlation between min-max normalized RW and PPRP encodings across β.

use gape_kit::baseline::{minmax_columns, pprp_encoding, rw_encoding};
use gape_kit::compare::compare;
use gape_kit::fixtures::{fixture, CYCLE6_FIXTURES};

fn show(x: Option<f64>) -> String {
    x.map_or("   n/a".into(), |v| format!("{v:+.3}"))
}

pub fn run() -> gape_kit::Result<()> {
    println!("{:<18} {:>5} {:>10} {:>10}", "graph", "beta", "min column", "min node");
    for name in CYCLE6_FIXTURES {
        let g = fixture(name)?;
        let rw = minmax_columns(&rw_encoding(&g, 6)?.values);
        for beta in [0.15, 0.5, 0.9, 0.99] {
            let pprp = minmax_columns(&pprp_encoding(&g, beta, 6)?.values);
            let c = compare(&rw, &pprp)?;
            println!(
                "{name:<18} {beta:>5} {:>10} {:>10}",
                show(c.min_column_pearson()),
                show(c.min_node_pearson())
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
