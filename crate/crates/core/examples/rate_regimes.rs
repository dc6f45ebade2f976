//! Error decay for geometric and algebraic Fourier data, with the fitted
//! log-slope compared to the a-priori bound.
//!
//! Run with `cargo run --example rate_regimes`.

use dsmqr::complexgeom::{build_layout, ConformalMap};
use dsmqr::harness::{boundary_residual, fit_log_points};
use dsmqr::solver::closed_form_coeffs;
use dsmqr::solver::{Basis, Method};
use dsmqr::spectral::{error_bound, synthetic_data, SyntheticData};
use dsmqr::{DiskParams, Result};

fn sweep(kind: SyntheticData, radius: f64) -> Result<()> {
    let map = ConformalMap::Identity;
    let mut errors = Vec::new();
    let mut bounds = Vec::new();
    for l in (4..=40).step_by(4) {
        let n = 2 * l + 1;
        let data = synthetic_data(kind, 8 * n)?;
        let params = DiskParams::new(1.0, radius, n, 1)?;
        let layout = build_layout(&map, n, n, 1.0, radius)?;
        let values: Vec<f64> = layout
            .collocation_angles
            .iter()
            .map(|&t| data.evaluate(t).re)
            .collect();
        let coeffs = closed_form_coeffs(&params, &values)?;
        let basis = Basis::new(Method::DsmQr, &params, &layout, &map)?;
        let err = boundary_residual(&coeffs, &basis, |t| Ok(data.evaluate(t).re), 10 * n)?;
        let bound = error_bound(&data, &params);
        println!("  N={n:>3} error={err:.3e} bound={bound:.3e}");
        // geometric data decays like κ'^N, algebraic data like a power of N
        let x = match kind {
            SyntheticData::Algebraic(_) => (n as f64).ln(),
            _ => n as f64,
        };
        if err > 1e-12 {
            errors.push((x, err));
            bounds.push((x, bound));
        }
    }
    let (slope, r2) = fit_log_points(&errors)?;
    let (bound_slope, _) = fit_log_points(&bounds)?;
    println!("  fitted slope {slope:.4} (R² {r2:.4}), bound slope {bound_slope:.4}");
    Ok(())
}

fn main() -> Result<()> {
    for (kind, radius) in [
        (SyntheticData::Geometric(0.8), 1.5),
        (SyntheticData::Geometric(0.5), 1.5),
        (SyntheticData::Geometric(0.9), 1.2),
        (SyntheticData::Algebraic(3.0), 1.5),
    ] {
        println!("{kind:?}, R = {radius}");
        sweep(kind, radius)?;
    }
    Ok(())
}
