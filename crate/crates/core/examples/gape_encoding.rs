// GAPE on a random graph with k = 32 states and γ = 0.02, written as CSV.

use gape_kit::graph::erdos_renyi;
use gape_kit::sylvester::Strategy;
use gape_kit::wgwa::{encode_gape, init_damped};

pub fn run() -> gape_kit::Result<()> {
    let g = erdos_renyi(20, 0.2, 1)?;
    let w = init_damped(32, g.label_count(), 0.02, 0)?;
    let (enc, report) = encode_gape(&g, &w, Strategy::Auto)?;
    println!("{}x{} encoding via {} solver", enc.nodes(), enc.dim(), report.method);
    for v in 0..3 {
        let head: Vec<String> = enc.row(v)[..4].iter().map(|x| format!("{x:+.4}")).collect();
        println!("node {}: [{} ...]", v + 1, head.join(", "));
    }
    let out = std::env::temp_dir().join("gape_kit_example_gape.csv");
    for path in enc.write(&out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
