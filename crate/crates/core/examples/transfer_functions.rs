//! Transfer functions `φ_n` and their boundary deviations `g_n` across the
//! residue classes of `n` modulo `N`.
//!
//! Run with `cargo run --example transfer_functions`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use dsmqr::spectral::{g_n, phi_n, residue};
use dsmqr::{DiskParams, Result};

fn main() -> Result<()> {
    let params = DiskParams::new(1.0, 1.5, 11, 1)?;
    println!("N = {}, kappa = {:.6}", params.n, params.kappa);
    for n in [0, 1, 3, 5, -5, 6, 11, 12, 16, 22, -23, 40] {
        // worst deviation on a fine boundary grid, for comparison with g_n
        let sampled = (0..4000)
            .map(|j| {
                let t = TAU * j as f64 / 4000.0;
                (Complex64::cis(n as f64 * t) - phi_n(n, &params, 1.0, t)).norm()
            })
            .fold(0.0, f64::max);
        println!(
            "n={n:>4} {:<10} g_n={:.12} sampled={sampled:.12}",
            format!("{:?}", residue(n, params.n)),
            g_n(n, &params)
        );
    }
    Ok(())
}
