// The rotation automaton on a string graph reproduces the sinusoidal encoding.

use gape_kit::baseline::reference_sinusoidal;
use gape_kit::wgwa::encode_sinusoidal_via_wgwa;

pub fn run() -> gape_kit::Result<()> {
    for length in [1, 10, 50, 200] {
        for k in [4, 64, 512] {
            let via = encode_sinusoidal_via_wgwa(length, k)?;
            let reference = reference_sinusoidal(length, k)?;
            let dev = via.values.max_abs_diff(&reference.values);
            println!("length={length:<4} k={k:<4} max deviation {dev:.2e}");
            assert!(dev <= 1e-6);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
