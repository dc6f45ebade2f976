//! Experiment runner: configuration, error estimation, N-sweeps, CSV output
//! and slope fitting.

mod config;
mod csv;
mod sweep;

pub use config::{BoundaryData, DataSpec, ExperimentConfig};
pub use csv::{basis_dump, write_basis_dump, write_csv, write_key_values, CSV_HEADER};
pub use sweep::{run_single, run_sweep, SweepRow};

use std::f64::consts::TAU;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::solver::{evaluate_solution, Basis};
use crate::spectral::{exact_disk_solution, FourierSeries};

/// Angles `2π(j + 1/2)/count`: midway between a uniform grid of `count`
/// points and hence offset from every collocation angle when `count` is a
/// multiple of `P`.
pub fn half_offset_angles(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| TAU * (j as f64 + 0.5) / count as f64)
        .collect()
}

/// `max_θ |u^(N)(1, θ) − f(θ)|` over the given preimage angles.
pub fn boundary_residual_at(
    coeffs: &DVector<f64>,
    basis: &Basis<'_>,
    boundary: impl Fn(f64) -> Result<f64>,
    angles: &[f64],
) -> Result<f64> {
    angles.iter().try_fold(0.0f64, |worst, &theta| {
        let approx = evaluate_solution(coeffs, basis, 1.0, theta)?;
        Ok(worst.max((approx - boundary(theta)?).abs()))
    })
}

/// Boundary residual at `n_samples` half-offset angles.
///
/// The error is harmonic, so by the maximum principle this estimates the
/// error over the whole region. Requires `n_samples ≥ 2P`.
pub fn boundary_residual(
    coeffs: &DVector<f64>,
    basis: &Basis<'_>,
    boundary: impl Fn(f64) -> Result<f64>,
    n_samples: usize,
) -> Result<f64> {
    let needed = 2 * basis.params.p;
    if n_samples < needed {
        return Err(Error::TooFewPoints {
            needed,
            got: n_samples,
        });
    }
    boundary_residual_at(coeffs, basis, boundary, &half_offset_angles(n_samples))
}

/// Maximum of `|u − u^(N)|` on the disk against the exact Fourier solution.
///
/// The grid has radii `s = i/n_r` for `i = 0..n_r` times `n_theta` angles,
/// plus a ring of `ring_samples` half-offset points on the boundary.
pub fn interior_error(
    coeffs: &DVector<f64>,
    basis: &Basis<'_>,
    fs: &FourierSeries,
    grid: (usize, usize),
    ring_samples: usize,
) -> Result<f64> {
    if !basis.map.is_identity() {
        return Err(Error::invalid("interior error needs the disk geometry"));
    }
    let rho = basis.params.rho;
    let (n_r, n_theta) = grid;
    let mut points: Vec<(f64, f64)> = (0..n_r)
        .flat_map(|i| {
            (0..n_theta).map(move |j| (i as f64 / n_r as f64, TAU * j as f64 / n_theta as f64))
        })
        .collect();
    points.extend(
        half_offset_angles(ring_samples)
            .into_iter()
            .map(|t| (1.0, t)),
    );
    points.into_iter().try_fold(0.0f64, |worst, (s, theta)| {
        let approx = evaluate_solution(coeffs, basis, s, theta)?;
        let exact = exact_disk_solution(fs, rho, rho * s, theta);
        Ok(worst.max((approx - exact).abs()))
    })
}

/// A numeric column of [`SweepRow`] usable in a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    N,
    /// `ln N`, for log-log fits.
    LnN,
    Cond2,
    ResidualLinf,
    InteriorErrorLinf,
    BoundValue,
    CoeffMax,
}

impl Field {
    pub fn get(self, row: &SweepRow) -> Option<f64> {
        match self {
            Field::N => Some(row.n as f64),
            Field::LnN => Some((row.n as f64).ln()),
            Field::Cond2 => row.cond2.value(),
            Field::ResidualLinf => row.residual_linf,
            Field::InteriorErrorLinf => row.interior_error_linf,
            Field::BoundValue => row.bound_value,
            Field::CoeffMax => row.coeff_max,
        }
    }
}

/// Least-squares slope of `ln y` against `x` and the coefficient of
/// determination, over rows passing `window` with both fields present and
/// `y > 0`.
pub fn fit_log_slope(
    rows: &[SweepRow],
    x: Field,
    y: Field,
    window: impl Fn(&SweepRow) -> bool,
) -> Result<(f64, f64)> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| window(r))
        .filter_map(|r| Some((x.get(r)?, y.get(r)?)))
        .filter(|&(_, v)| v > 0.0)
        .collect();
    fit_log_points(&points)
}

/// [`fit_log_slope`] on raw `(x, y)` pairs.
pub fn fit_log_points(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    // also rejects NaN
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if points.iter().any(|&(_, y)| !(y > 0.0)) {
        return Err(Error::invalid("log fit needs positive y values"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid(
            "log fit needs at least two distinct x values",
        ));
    }
    let slope = sxy / sxx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((slope, r2))
}
