// Run the built-in equivalence checks and print the report.

use gape_kit::verify::{run as run_suite, Suite};

pub fn run() -> gape_kit::Result<()> {
    let report = run_suite(Suite::All);
    println!("{report}");
    assert!(report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
