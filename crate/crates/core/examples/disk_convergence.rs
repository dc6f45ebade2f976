//! Solves the disk problem for `x²y³` boundary data and reports boundary and
//! interior errors against the exact solution.
//!
//! Run with `cargo run --example disk_convergence`.

use dsmqr::complexgeom::{build_layout, ConformalMap};
use dsmqr::harness::{boundary_residual, interior_error};
use dsmqr::solver::{assemble, solve, Method};
use dsmqr::spectral::{synthetic_data, SyntheticData};
use dsmqr::{DiskParams, Result};

fn main() -> Result<()> {
    let map = ConformalMap::Identity;
    let data = synthetic_data(SyntheticData::X2Y3, 5)?;
    for n in [5, 9, 11, 13, 21, 41] {
        let params = DiskParams::new(1.0, 1.5, n, 1)?;
        let layout = build_layout(&map, n, n, 1.0, 1.5)?;
        let values: Vec<f64> = layout
            .collocation_angles
            .iter()
            .map(|&t| data.evaluate(t).re)
            .collect();
        for method in [Method::Dsm, Method::DsmQr] {
            let system = assemble(method, &params, &layout, &map, &values)?;
            let result = solve(&system)?;
            let basis = system.basis();
            let boundary =
                boundary_residual(&result.coeffs, &basis, |t| Ok(data.evaluate(t).re), 10 * n)?;
            let interior = interior_error(&result.coeffs, &basis, &data, (20, 72), 10 * n)?;
            println!(
                "N={n:>3} {:<7} cond2={:<24} boundary={boundary:.3e} interior={interior:.3e}",
                method.tag(),
                result.cond2
            );
        }
    }
    Ok(())
}
