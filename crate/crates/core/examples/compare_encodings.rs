// Write two encodings to CSV, read them back and compare.

use gape_kit::baseline::lape;
use gape_kit::compare::compare;
use gape_kit::encoding::{EncodingMatrix, Scheme};
use gape_kit::graph::erdos_renyi;
use gape_kit::sylvester::Strategy;
use gape_kit::wgwa::{encode_gape, init_damped};

pub fn run() -> gape_kit::Result<()> {
    let g = erdos_renyi(15, 0.3, 2)?;
    let gape = encode_gape(&g, &init_damped(8, 1, 0.05, 0)?, Strategy::Auto)?.0;
    let lape = lape(&g, 8)?;

    let dir = std::env::temp_dir();
    let (pa, pb) = (dir.join("gape_kit_example_a.csv"), dir.join("gape_kit_example_b.csv"));
    gape.write(&pa)?;
    lape.write(&pb)?;
    let a = EncodingMatrix::read(&pa, Scheme::Gape)?;
    let b = EncodingMatrix::read(&pb, Scheme::Lape)?;
    assert_eq!(a, gape, "CSV round trip is exact");

    let same = compare(&a.values, &a.values)?;
    let diff = compare(&a.values, &b.values)?;
    println!("gape vs itself: max|diff| = {}", same.max_abs_diff);
    println!("gape vs lape:   max|diff| = {:.3}, mse = {:.3e}", diff.max_abs_diff, diff.mse);
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
