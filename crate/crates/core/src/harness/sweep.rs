use std::time::Instant;

use rayon::prelude::*;

use super::config::{BoundaryData, ExperimentConfig};
use super::{boundary_residual, interior_error};
use crate::basis::DiskParams;
use crate::complexgeom::build_layout;
use crate::error::Result;
use crate::solver::{assemble, cond2_closed_form, solve, Cond2, Method};
use crate::spectral::error_bound;

/// Interior grid: 20 radii by 72 angles.
const INTERIOR_GRID: (usize, usize) = (20, 72);

/// One `(method, N)` record of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub method: Method,
    pub geometry: String,
    pub n: usize,
    pub p: usize,
    pub rho: f64,
    pub radius: f64,
    pub kappa: f64,
    pub cond2: Cond2,
    /// `2/(1 + κ^{N−2})`, disk DSM-QR with `P = N` only.
    pub cond2_closed_form: Option<f64>,
    /// Boundary residual at half-offset samples; `None` if the run failed.
    pub residual_linf: Option<f64>,
    /// Disk only: error against the exact Fourier solution.
    pub interior_error_linf: Option<f64>,
    /// Disk DSM-QR with `P = N`: the a-priori error bound.
    pub bound_value: Option<f64>,
    pub coeff_max: Option<f64>,
    pub wall_ms: f64,
    /// Solver warnings or the error that stopped this row.
    pub note: String,
}

/// Solves one `(method, N)` case of the configuration.
///
/// Failures are recorded in `note` rather than returned, so a sweep always
/// yields one row per case.
pub fn run_single(config: &ExperimentConfig, method: Method, n: usize) -> SweepRow {
    let mut row = SweepRow {
        method,
        geometry: config.geometry.tag().to_string(),
        n,
        p: config.alpha * n,
        rho: config.rho,
        radius: config.radius,
        kappa: config.rho / config.radius,
        cond2: Cond2::Saturated,
        cond2_closed_form: None,
        residual_linf: None,
        interior_error_linf: None,
        bound_value: None,
        coeff_max: None,
        wall_ms: 0.0,
        note: String::new(),
    };
    if let Err(err) = fill_row(config, &mut row) {
        row.note = err.to_string();
    }
    row
}

fn fill_row(config: &ExperimentConfig, row: &mut SweepRow) -> Result<()> {
    let map = &config.geometry;
    let params = DiskParams::new(config.rho, config.radius, row.n, config.alpha)?;
    let layout = build_layout(map, row.n, params.p, config.rho, config.radius)?;
    let data = BoundaryData::resolve(&config.data, map, config.rho, row.n)?;
    let values = layout
        .collocation_angles
        .iter()
        .map(|&t| data.value(t))
        .collect::<Result<Vec<f64>>>()?;

    let start = Instant::now();
    let system = assemble(row.method, &params, &layout, map, &values)?;
    let assembly = start.elapsed();
    let result = solve(&system)?;
    if config.timing {
        // assembly plus the coefficient solve; the SVD for cond2 is not timed
        row.wall_ms = (assembly + result.wall_time).as_secs_f64() * 1e3;
    }

    let disk_dsmqr = map.is_identity() && row.method == Method::DsmQr && config.alpha == 1;
    row.cond2 = result.cond2;
    row.note = result.warnings.join("; ");
    row.coeff_max = Some(result.coeffs.amax());
    if disk_dsmqr {
        row.cond2_closed_form = Some(cond2_closed_form(&params));
    }

    let basis = system.basis();
    let samples = config.residual_samples(params.p);
    row.residual_linf = Some(boundary_residual(
        &result.coeffs,
        &basis,
        |t| data.value(t),
        samples,
    )?);
    if let Some(fs) = data.series().filter(|_| map.is_identity()) {
        row.interior_error_linf = Some(interior_error(
            &result.coeffs,
            &basis,
            fs,
            INTERIOR_GRID,
            samples,
        )?);
        if disk_dsmqr {
            row.bound_value = Some(error_bound(fs, &params));
        }
    }
    Ok(())
}

/// Runs every `(method, N)` case, in parallel, and returns the rows in
/// ascending `N` with methods in configuration order.
pub fn run_sweep(config: &ExperimentConfig) -> Vec<SweepRow> {
    let cases: Vec<(usize, usize, Method)> = config
        .sizes()
        .flat_map(|n| {
            config
                .methods
                .iter()
                .enumerate()
                .map(move |(i, &m)| (n, i, m))
        })
        .collect();
    // the largest cases dominate; start them first
    let mut rows: Vec<(usize, usize, SweepRow)> = cases
        .into_par_iter()
        .rev()
        .map(|(n, i, m)| (n, i, run_single(config, m, n)))
        .collect();
    rows.sort_by_key(|&(n, i, _)| (n, i));
    rows.into_iter().map(|(_, _, row)| row).collect()
}
