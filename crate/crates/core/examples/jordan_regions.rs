//! DSM and DSM-QR on the quintic and Joukowski regions.
//!
//! Run with `cargo run --example jordan_regions`.

use dsmqr::harness::{run_single, ExperimentConfig};
use dsmqr::{ConformalMap, Result};

fn main() -> Result<()> {
    for map in [
        ConformalMap::quintic_example(),
        ConformalMap::joukowski_example(),
    ] {
        let mut config = ExperimentConfig::defaults(map);
        config.timing = false;
        println!("{} (R = {})", config.geometry, config.radius);
        for n in [11, 21, 41, 81, 121] {
            for &method in &config.methods {
                let row = run_single(&config, method, n);
                println!(
                    "  N={n:>3} {:<14} cond2={:<24} residual={:.3e}",
                    method.tag(),
                    row.cond2.to_string(),
                    row.residual_linf.unwrap_or(f64::NAN)
                );
            }
        }
    }
    Ok(())
}
