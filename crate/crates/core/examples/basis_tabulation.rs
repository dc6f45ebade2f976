//! Tabulates the orthogonalized disk basis, checks the closed form against
//! the numerical QR factorization, and prints the Gram diagonal.
//!
//! Run with `cargo run --example basis_tabulation`.

use std::f64::consts::TAU;

use dsmqr::basis::{dsmqr_basis_numeric, psi_eval};
use dsmqr::complexgeom::{build_layout, ConformalMap};
use dsmqr::solver::{assemble, gram_diagonal_closed_form, Method};
use dsmqr::{DiskParams, Result};

fn main() -> Result<()> {
    let n = 7;
    let params = DiskParams::new(1.0, 1.5, n, 1)?;
    let numeric = dsmqr_basis_numeric(&params)?;

    let mut worst = 0.0f64;
    for i in 0..=4 {
        let s = i as f64 / 4.0;
        for j in 0..12 {
            let theta = TAU * j as f64 / 12.0;
            let values = numeric.eval(s, theta);
            for k in 1..=n {
                worst = worst.max((values[k - 1] - psi_eval(k, s, theta, &params)?).abs());
            }
        }
    }
    println!("max |closed form - numerical QR| over the grid: {worst:.2e}");

    println!("psi_k(1, theta) at theta = 0, pi/4, pi/2:");
    for k in 1..=n {
        let row: Vec<String> = [0.0, TAU / 8.0, TAU / 4.0]
            .iter()
            .map(|&t| psi_eval(k, 1.0, t, &params).map(|v| format!("{v:>12.8}")))
            .collect::<Result<_>>()?;
        println!("  k={k} {}", row.join(" "));
    }

    let map = ConformalMap::Identity;
    let layout = build_layout(&map, n, n, 1.0, 1.5)?;
    let g = assemble(Method::DsmQr, &params, &layout, &map, &[0.0; 7])?.g;
    let gram = g.transpose() * &g;
    for (k, closed) in gram_diagonal_closed_form(&params).iter().enumerate() {
        println!(
            "  [G^T G]_{}{} = {:.12} closed form {closed:.12}",
            k + 1,
            k + 1,
            gram[(k, k)]
        );
    }
    Ok(())
}
