//! Collocation assembly, linear solves, condition numbers and evaluation of
//! approximate solutions.
//!
//! All methods share one shape: a basis `{b_k}` evaluated at preimage polar
//! coordinates `(s, θ)` and a collocation matrix `G_jk = b_k(1, θ_j)`. The
//! DSM-QR disk matrix has a diagonal Gram matrix, so its coefficients and
//! condition number are also available in closed form.

mod dense;

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{dipole_kernel, jordan_basis_eval, mfs_kernel, psi_eval, DiskParams};
use crate::complexgeom::{ConformalMap, PointLayout};
use crate::error::{Error, Result};

/// Relative LU pivots below this mark the system as numerically singular.
pub const PIVOT_THRESHOLD: f64 = 1e-15;

/// `σ_min / σ_max` below this is reported as a saturated condition number.
pub const SATURATION_RATIO: f64 = 1e-280;

/// Basis family used for the approximate solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Classical dipole simulation method.
    Dsm,
    /// QR-reconditioned dipole basis on the disk.
    DsmQr,
    /// Method of fundamental solutions with the log kernel.
    Mfs,
    /// DSM-QR basis plus the conformal correction term.
    DsmQrJordan,
    /// Classical DSM on mapped points.
    DsmJordan,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Dsm,
        Method::DsmQr,
        Method::Mfs,
        Method::DsmQrJordan,
        Method::DsmJordan,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Dsm => "dsm",
            Method::DsmQr => "dsm-qr",
            Method::Mfs => "mfs",
            Method::DsmQrJordan => "dsm-qr-jordan",
            Method::DsmJordan => "dsm-jordan",
        }
    }

    /// Whether the method is meaningful on the given geometry.
    pub fn supports(self, map: &ConformalMap) -> bool {
        !matches!(self, Method::DsmQr) || map.is_identity()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown method '{s}'")))
    }
}

/// Spectral condition number, or a flag when `σ_min` is lost entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cond2 {
    Finite(f64),
    Saturated,
}

impl Cond2 {
    pub fn value(self) -> Option<f64> {
        match self {
            Cond2::Finite(v) => Some(v),
            Cond2::Saturated => None,
        }
    }

    pub fn is_saturated(self) -> bool {
        matches!(self, Cond2::Saturated)
    }
}

impl fmt::Display for Cond2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cond2::Finite(v) => write!(f, "{v:.16e}"),
            Cond2::Saturated => f.write_str("SAT"),
        }
    }
}

/// A method bound to its geometry: evaluates `b_k(s, θ)`.
#[derive(Debug, Clone, Copy)]
pub struct Basis<'a> {
    pub method: Method,
    pub params: &'a DiskParams,
    pub layout: &'a PointLayout,
    pub map: &'a ConformalMap,
}

impl<'a> Basis<'a> {
    pub fn new(
        method: Method,
        params: &'a DiskParams,
        layout: &'a PointLayout,
        map: &'a ConformalMap,
    ) -> Result<Self> {
        if !method.supports(map) {
            return Err(Error::invalid(format!(
                "method {method} needs the disk geometry"
            )));
        }
        if layout.n_sources() != params.n {
            return Err(Error::DimensionMismatch {
                expected: params.n,
                got: layout.n_sources(),
            });
        }
        Ok(Basis {
            method,
            params,
            layout,
            map,
        })
    }

    /// Physical location of the preimage point `ρ s e^{iθ}`.
    pub fn physical_point(&self, s: f64, theta: f64) -> Result<Complex64> {
        self.map
            .eval(Complex64::from_polar(self.params.rho * s, theta))
    }

    /// Basis function `k` (1-based) at preimage polar coordinates.
    pub fn eval(&self, k: usize, s: f64, theta: f64) -> Result<f64> {
        self.eval_at(k, s, theta, None)
    }

    fn eval_at(&self, k: usize, s: f64, theta: f64, physical: Option<Complex64>) -> Result<f64> {
        if k == 0 || k > self.params.n {
            return Err(Error::invalid(format!("basis index {k} out of range")));
        }
        let idx = k - 1;
        let z = || physical.map_or_else(|| self.physical_point(s, theta), Ok);
        match self.method {
            Method::DsmQr => psi_eval(k, s, theta, self.params),
            Method::DsmQrJordan => {
                jordan_basis_eval(k, s, theta, self.map, self.layout, self.params)
            }
            Method::Dsm | Method::DsmJordan => {
                dipole_kernel(z()?, self.layout.singular[idx], self.layout.moments[idx])
            }
            Method::Mfs => mfs_kernel(z()?, self.layout.singular[idx]),
        }
    }

    /// All `N` basis values at one point.
    pub fn eval_all(&self, s: f64, theta: f64) -> Result<Vec<f64>> {
        if self.method == Method::DsmQr && self.params.m == self.params.n - 1 {
            return Ok(psi_all(self.params, s, theta));
        }
        let physical = match self.method {
            Method::Dsm | Method::DsmJordan | Method::Mfs => Some(self.physical_point(s, theta)?),
            _ => None,
        };
        (1..=self.params.n)
            .map(|k| self.eval_at(k, s, theta, physical))
            .collect()
    }
}

/// `ψ_1..ψ_N` from powers of `w = s e^{iθ}`, avoiding per-term trigonometry.
fn psi_all(params: &DiskParams, s: f64, theta: f64) -> Vec<f64> {
    let n = params.n;
    let mut powers = Vec::with_capacity(n);
    let w = Complex64::from_polar(s, theta);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        powers.push(acc);
        acc *= w;
    }
    let scale = (n as f64 / 2.0).sqrt();
    let mut out = vec![0.0; n];
    out[0] = (n as f64).sqrt();
    for m in 1..=params.half() {
        let weight = params.kappa.powi((n - 2 * m) as i32);
        let (low, high) = (powers[m], powers[n - m]);
        out[2 * m - 1] = scale * (low.im - weight * high.im);
        out[2 * m] = scale * (low.re + weight * high.re);
    }
    out
}

/// The dense collocation system `G Q = f`.
#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub g: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub method: Method,
    pub params: DiskParams,
    pub layout: PointLayout,
    pub map: ConformalMap,
}

impl CollocationSystem {
    pub fn basis(&self) -> Basis<'_> {
        Basis {
            method: self.method,
            params: &self.params,
            layout: &self.layout,
            map: &self.map,
        }
    }
}

/// Coefficients and diagnostics of one solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coeffs: DVector<f64>,
    pub cond2: Cond2,
    /// `max_j |(G Q − f)_j|`.
    pub residual_linf: f64,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

/// Builds `G_jk = b_k(1, θ_j)` and the right-hand side.
pub fn assemble(
    method: Method,
    params: &DiskParams,
    layout: &PointLayout,
    map: &ConformalMap,
    boundary_values: &[f64],
) -> Result<CollocationSystem> {
    let basis = Basis::new(method, params, layout, map)?;
    if layout.n_collocation() != params.p {
        return Err(Error::DimensionMismatch {
            expected: params.p,
            got: layout.n_collocation(),
        });
    }
    if boundary_values.len() != params.p {
        return Err(Error::DimensionMismatch {
            expected: params.p,
            got: boundary_values.len(),
        });
    }

    let mut g = DMatrix::zeros(params.p, params.n);
    for (j, &theta) in layout.collocation_angles.iter().enumerate() {
        let physical = match method {
            Method::Dsm | Method::DsmJordan | Method::Mfs => Some(layout.collocation[j]),
            _ => None,
        };
        for k in 1..=params.n {
            g[(j, k - 1)] = basis.eval_at(k, 1.0, theta, physical)?;
        }
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("collocation matrix has non-finite entries"));
    }

    Ok(CollocationSystem {
        g,
        rhs: DVector::from_column_slice(boundary_values),
        method,
        params: *params,
        layout: layout.clone(),
        map: map.clone(),
    })
}

/// `[GᵀG]_kk` for the disk DSM-QR matrix with `P = N`:
/// `N²` for `k = 1`, `(N²/4)(1 + κ^{N−2m})²` for `k = 2m, 2m + 1`.
pub fn gram_diagonal_closed_form(params: &DiskParams) -> DVector<f64> {
    let n = params.n;
    let n2 = (n * n) as f64;
    DVector::from_fn(n, |i, _| {
        if i == 0 {
            n2
        } else {
            let m = i.div_ceil(2);
            let w = params.kappa.powi((n - 2 * m) as i32);
            n2 / 4.0 * (1.0 + w) * (1.0 + w)
        }
    })
}

/// `2 / (1 + κ^{N−2})`.
pub fn cond2_closed_form(params: &DiskParams) -> f64 {
    2.0 / (1.0 + params.kappa.powi(params.n as i32 - 2))
}

/// Spectral condition number `σ_max / σ_min`.
pub fn cond2(g: &DMatrix<f64>) -> Cond2 {
    let sv = dense::jacobi_singular_values(g);
    let (max, min) = match (sv.first(), sv.last()) {
        (Some(&max), Some(&min)) => (max, min),
        _ => return Cond2::Saturated,
    };
    if max == 0.0 || min <= SATURATION_RATIO * max {
        Cond2::Saturated
    } else {
        Cond2::Finite(max / min)
    }
}

/// Singular values of `G`, largest first.
pub fn singular_values(g: &DMatrix<f64>) -> Vec<f64> {
    dense::jacobi_singular_values(g)
}

fn residual_linf(g: &DMatrix<f64>, coeffs: &DVector<f64>, rhs: &DVector<f64>) -> f64 {
    (g * coeffs - rhs).amax()
}

/// Coefficients and solver warnings, without the condition number.
///
/// Square systems use row-pivoted elimination; a relative pivot below
/// [`PIVOT_THRESHOLD`] does not abort but yields a best-effort solution
/// and a warning. Overdetermined DSM-QR systems on the disk go through the
/// normal equations `GᵀG Q = Gᵀf`, whose matrix is (near) diagonal; every
/// other least-squares case uses a Householder factorization of `G` so the
/// conditioning is not squared.
pub fn solve_coefficients(system: &CollocationSystem) -> Result<(DVector<f64>, Vec<String>)> {
    coefficients(system, system.g.nrows() != system.g.ncols())
}

fn coefficients(
    system: &CollocationSystem,
    least_squares: bool,
) -> Result<(DVector<f64>, Vec<String>)> {
    let (p, n) = system.g.shape();
    if p < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p,
        });
    }
    let g = &system.g;
    let mut warnings = Vec::new();
    if !least_squares {
        let lu = dense::lu_solve(g, &system.rhs);
        if lu.min_relative_pivot < PIVOT_THRESHOLD {
            warnings.push(format!(
                "numerically singular: relative pivot {:.3e}",
                lu.min_relative_pivot
            ));
        }
        return Ok((lu.solution, warnings));
    }

    let coeffs = if system.method == Method::DsmQr {
        let gram = g.transpose() * g;
        let gtf = g.transpose() * &system.rhs;
        match gram.clone().cholesky() {
            Some(chol) => chol.solve(&gtf),
            None => {
                warnings.push("normal equations not positive definite".to_string());
                dense::lu_solve(&gram, &gtf).solution
            }
        }
    } else {
        let qr = g.clone().qr();
        let r = qr.r();
        let qtf = qr.q().transpose() * &system.rhs;
        let scale = r.diagonal().amax();
        let min_diag = r
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if scale == 0.0 || min_diag < PIVOT_THRESHOLD * scale {
            warnings.push(format!(
                "numerically rank deficient: relative diagonal {:.3e}",
                if scale > 0.0 { min_diag / scale } else { 0.0 }
            ));
        }
        back_substitute(&r, &qtf)
    };
    Ok((coeffs, warnings))
}

fn finish(system: &CollocationSystem, least_squares: bool) -> Result<SolveResult> {
    let start = Instant::now();
    let (coeffs, warnings) = coefficients(system, least_squares)?;
    let wall_time = start.elapsed();
    let cond = if warnings.is_empty() {
        cond2(&system.g)
    } else {
        Cond2::Saturated
    };
    let residual = residual_linf(&system.g, &coeffs, &system.rhs);
    Ok(SolveResult {
        coeffs,
        cond2: cond,
        residual_linf: residual,
        wall_time,
        warnings,
    })
}

/// Solves the square system (`P = N`). A numerically singular matrix
/// gives a best-effort solution, a warning and a saturated condition
/// number.
pub fn solve_square(system: &CollocationSystem) -> Result<SolveResult> {
    let (p, n) = system.g.shape();
    if p != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p,
        });
    }
    finish(system, false)
}

/// Least-squares solve for `P = αN`; see [`solve_coefficients`].
pub fn solve_least_squares(system: &CollocationSystem) -> Result<SolveResult> {
    let (p, n) = system.g.shape();
    if p < n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p,
        });
    }
    finish(system, true)
}

/// Square solve when `P = N`, least squares otherwise.
pub fn solve(system: &CollocationSystem) -> Result<SolveResult> {
    finish(system, system.g.nrows() != system.g.ncols())
}

fn back_substitute(r: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = r.ncols();
    let mut x = DVector::zeros(n);
    for row in (0..n).rev() {
        let pivot = r[(row, row)];
        if pivot == 0.0 {
            continue;
        }
        let mut acc = b[row];
        for j in row + 1..n {
            acc -= r[(row, j)] * x[j];
        }
        x[row] = acc / pivot;
    }
    x
}

/// `Q_k = (1/[GᵀG]_kk) Σ_j ψ_k(1, θ_j) f_j` for the disk DSM-QR system
/// with `P = N`.
pub fn closed_form_coeffs(params: &DiskParams, boundary_values: &[f64]) -> Result<DVector<f64>> {
    if params.alpha != 1 {
        return Err(Error::invalid("closed-form coefficients need alpha = 1"));
    }
    if boundary_values.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: boundary_values.len(),
        });
    }
    let gram = gram_diagonal_closed_form(params);
    let n = params.n;
    let mut coeffs = DVector::zeros(n);
    for k in 1..=n {
        let mut acc = 0.0;
        for (j, f) in boundary_values.iter().enumerate() {
            let theta = TAU * (j + 1) as f64 / n as f64;
            acc += psi_eval(k, 1.0, theta, params)? * f;
        }
        coeffs[k - 1] = acc / gram[k - 1];
    }
    Ok(coeffs)
}

/// `u^(N)(s, θ) = Σ_k Q_k b_k(s, θ)` at preimage polar coordinates.
pub fn evaluate_solution(
    coeffs: &DVector<f64>,
    basis: &Basis<'_>,
    s: f64,
    theta: f64,
) -> Result<f64> {
    if coeffs.len() != basis.params.n {
        return Err(Error::DimensionMismatch {
            expected: basis.params.n,
            got: coeffs.len(),
        });
    }
    let values = basis.eval_all(s, theta)?;
    Ok(values.iter().zip(coeffs.iter()).map(|(b, q)| b * q).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexgeom::build_layout;

    fn disk(n: usize, radius: f64, alpha: usize) -> (DiskParams, PointLayout) {
        let params = DiskParams::new(1.0, radius, n, alpha).unwrap();
        let layout = build_layout(&ConformalMap::Identity, n, params.p, 1.0, radius).unwrap();
        (params, layout)
    }

    fn system(
        method: Method,
        n: usize,
        radius: f64,
        alpha: usize,
        f: impl Fn(f64) -> f64,
    ) -> CollocationSystem {
        let (params, layout) = disk(n, radius, alpha);
        let rhs: Vec<f64> = layout.collocation_angles.iter().map(|&t| f(t)).collect();
        assemble(method, &params, &layout, &ConformalMap::Identity, &rhs).unwrap()
    }

    #[test]
    fn method_tags_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.tag().parse::<Method>().unwrap(), m);
        }
        assert!("qr".parse::<Method>().is_err());
    }

    #[test]
    fn dsm_qr_first_column_constant() {
        let sys = system(Method::DsmQr, 9, 1.5, 1, |t| t.cos());
        for v in sys.g.column(0).iter() {
            assert!((v - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn dsm_entry_value() {
        let sys = system(Method::Dsm, 3, 1.5, 1, |_| 0.0);
        // z_3 = 1, ζ_3 = 1.5, ν_3 = 1
        assert!((sys.g[(2, 2)] - 1.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn dsm_qr_rows_are_psi_values() {
        let sys = system(Method::DsmQr, 3, 1.5, 1, |_| 0.0);
        for (j, &t) in sys.layout.collocation_angles.iter().enumerate() {
            assert!((sys.g[(j, 0)] - 3f64.sqrt()).abs() < 1e-15);
            for k in 2..=3 {
                assert_eq!(sys.g[(j, k - 1)], psi_eval(k, 1.0, t, &sys.params).unwrap());
            }
        }
    }

    #[test]
    fn assemble_rejects_bad_lengths() {
        let (params, layout) = disk(5, 1.5, 1);
        let err = assemble(
            Method::DsmQr,
            &params,
            &layout,
            &ConformalMap::Identity,
            &[0.0; 4],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        let map = ConformalMap::quintic_example();
        let mapped = build_layout(&map, 5, 5, 1.0, 1.05).unwrap();
        let p = DiskParams::new(1.0, 1.05, 5, 1).unwrap();
        assert!(assemble(Method::DsmQr, &p, &mapped, &map, &[0.0; 5]).is_err());
    }

    #[test]
    fn gram_closed_form_small_case() {
        let params = DiskParams::new(1.0, 1.5, 3, 1).unwrap();
        let d = gram_diagonal_closed_form(&params);
        assert!((d[0] - 9.0).abs() < 1e-14);
        assert!((d[1] - 6.25).abs() < 1e-14);
        assert!((d[2] - 6.25).abs() < 1e-14);
        let sys = system(Method::DsmQr, 3, 1.5, 1, |_| 0.0);
        let gram = sys.g.transpose() * &sys.g;
        for i in 0..3 {
            assert!((gram[(i, i)] - d[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_closed_form_limits() {
        let p5 = DiskParams::new(1.0, 1.5, 5, 1).unwrap();
        let d = gram_diagonal_closed_form(&p5);
        let w = (2.0f64 / 3.0).powi(3);
        assert!((d[1] - 25.0 / 4.0 * (1.0 + w).powi(2)).abs() < 1e-12);
        let tiny = DiskParams::new(1.0, 1e8, 7, 1).unwrap();
        let d = gram_diagonal_closed_form(&tiny);
        assert!((d[0] - 49.0).abs() < 1e-12);
        for v in d.iter().skip(1) {
            assert!((v - 49.0 / 4.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cond2_simple_matrices() {
        let (c, s) = (0.6, 0.8);
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        assert!((cond2(&rot).value().unwrap() - 1.0).abs() < 1e-15);
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!((cond2(&d).value().unwrap() - 2.0).abs() < 1e-15);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(cond2(&singular).is_saturated());
    }

    #[test]
    fn cond2_closed_form_values() {
        let p = DiskParams::new(1.0, 2.0, 3, 1).unwrap();
        assert!((cond2_closed_form(&p) - 4.0 / 3.0).abs() < 1e-15);
        let near_one = DiskParams::new(1.0, 1.0 + 1e-12, 5, 1).unwrap();
        assert!((cond2_closed_form(&near_one) - 1.0).abs() < 1e-10);
        let large = DiskParams::new(1.0, 1.5, 401, 1).unwrap();
        assert!((cond2_closed_form(&large) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn measured_cond2_matches_closed_form() {
        for n in (3..=41).step_by(2) {
            for radius in [1.1, 1.5] {
                let sys = system(Method::DsmQr, n, radius, 1, |_| 0.0);
                let measured = cond2(&sys.g).value().unwrap();
                let expected = cond2_closed_form(&sys.params);
                assert!((measured / expected - 1.0).abs() < 1e-9, "N={n} R={radius}");
            }
        }
    }

    #[test]
    fn zero_rhs_gives_zero_coeffs() {
        let sys = system(Method::DsmQr, 7, 1.5, 1, |_| 0.0);
        let res = solve_square(&sys).unwrap();
        assert!(res.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn constant_rhs_selects_first_basis() {
        let n = 9;
        let sys = system(Method::DsmQr, n, 1.5, 1, |_| (n as f64).sqrt());
        let res = solve_square(&sys).unwrap();
        assert!((res.coeffs[0] - 1.0).abs() < 1e-13);
        assert!(res.coeffs.iter().skip(1).all(|c| c.abs() < 1e-13));
        assert!(res.warnings.is_empty());
    }

    #[test]
    fn closed_form_coefficients_agree_with_solver() {
        for n in (3..=41).step_by(2) {
            let f = |t: f64| (3.0 * t).sin() + 0.3 * (t + 0.2).cos().exp();
            let sys = system(Method::DsmQr, n, 1.5, 1, f);
            let res = solve_square(&sys).unwrap();
            let closed = closed_form_coeffs(&sys.params, sys.rhs.as_slice()).unwrap();
            let scale = sys.rhs.amax();
            assert!((res.coeffs - closed).amax() < 1e-9 * scale, "N = {n}");
        }
    }

    #[test]
    fn closed_form_constant_data() {
        let params = DiskParams::new(1.0, 1.5, 7, 1).unwrap();
        let q = closed_form_coeffs(&params, &[2.5; 7]).unwrap();
        assert!((q[0] - 2.5 / 7f64.sqrt()).abs() < 1e-14);
        assert!(q.iter().skip(1).all(|v| v.abs() < 1e-14));
        let zero = closed_form_coeffs(&params, &[0.0; 7]).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn power_recurrence_matches_closed_form_basis() {
        for n in [3usize, 9, 41, 151] {
            let (params, layout) = disk(n, 1.1, 1);
            let basis =
                Basis::new(Method::DsmQr, &params, &layout, &ConformalMap::Identity).unwrap();
            for (s, t) in [(0.0, 0.0), (0.5, 1.0), (1.0, 2.9), (0.93, -0.4)] {
                let fast = basis.eval_all(s, t).unwrap();
                for (k, v) in fast.iter().enumerate() {
                    let direct = psi_eval(k + 1, s, t, &params).unwrap();
                    assert!(
                        (v - direct).abs() < 1e-12 * (n as f64).sqrt(),
                        "N={n} k={}",
                        k + 1
                    );
                }
            }
        }
    }

    #[test]
    fn least_squares_matches_square_at_alpha_one() {
        for method in [Method::DsmQr, Method::Dsm, Method::Mfs] {
            let sys = system(method, 11, 1.5, 1, |t| (2.0 * t).cos() + t.sin());
            let a = solve_square(&sys).unwrap();
            let b = solve_least_squares(&sys).unwrap();
            let rel = (&a.coeffs - &b.coeffs).amax() / a.coeffs.amax();
            assert!(rel < 1e-10, "{method}: {rel}");
        }
    }

    #[test]
    fn overdetermined_consistent_system() {
        // data in the span of the basis: ψ_3 sampled on the boundary
        let (params, layout) = disk(7, 1.5, 3);
        let rhs: Vec<f64> = layout
            .collocation_angles
            .iter()
            .map(|&t| psi_eval(3, 1.0, t, &params).unwrap())
            .collect();
        {
            let method = Method::DsmQr;
            let sys = assemble(method, &params, &layout, &ConformalMap::Identity, &rhs).unwrap();
            let res = solve_least_squares(&sys).unwrap();
            assert!(res.residual_linf <= 1e-10 * sys.rhs.amax());
            assert!((res.coeffs[2] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_solve_reproduces_transfer_function() {
        // N = 3, κ = 2/3, f = cos θ: u = Re φ_1 = (s cos θ + κ s² cos 2θ)/(1 + κ)
        let sys = system(Method::DsmQr, 3, 1.5, 1, |t| t.cos());
        let res = solve_square(&sys).unwrap();
        let basis = sys.basis();
        let kappa = 2.0 / 3.0;
        for i in 0..10 {
            let s = i as f64 / 9.0;
            for t in 0..10 {
                let theta = TAU * t as f64 / 10.0;
                let u = evaluate_solution(&res.coeffs, &basis, s, theta).unwrap();
                let expected =
                    (s * theta.cos() + kappa * s * s * (2.0 * theta).cos()) / (1.0 + kappa);
                assert!((u - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn evaluation_reproduces_collocation_data() {
        for method in [Method::DsmQr, Method::Dsm, Method::Mfs] {
            let sys = system(method, 15, 1.5, 1, |t| (t.cos().powi(2)) * t.sin().powi(3));
            let res = solve_square(&sys).unwrap();
            let basis = sys.basis();
            let scale = sys.rhs.amax();
            for (j, &t) in sys.layout.collocation_angles.iter().enumerate() {
                let u = evaluate_solution(&res.coeffs, &basis, 1.0, t).unwrap();
                assert!((u - sys.rhs[j]).abs() <= 1e-9 * scale, "{method}");
            }
        }
    }

    #[test]
    fn unit_coefficient_evaluates_to_constant() {
        let sys = system(Method::DsmQr, 5, 1.5, 1, |_| 0.0);
        let mut coeffs = DVector::zeros(5);
        coeffs[0] = 1.0;
        let basis = sys.basis();
        for (s, t) in [(0.0, 0.0), (0.5, 1.0), (1.0, 4.0)] {
            assert!(
                (evaluate_solution(&coeffs, &basis, s, t).unwrap() - 5f64.sqrt()).abs() < 1e-15
            );
        }
    }

    #[test]
    fn classical_dsm_degrades_without_aborting() {
        let sys = system(Method::Dsm, 201, 1.5, 1, |t| t.sin());
        let res = solve_square(&sys).unwrap();
        assert!(res.coeffs.iter().all(|v| v.is_finite()));
        match res.cond2 {
            Cond2::Finite(v) => assert!(v > 1e12),
            Cond2::Saturated => assert!(!res.warnings.is_empty()),
        }
    }

    #[test]
    fn scale_equivariance() {
        let sys = system(Method::DsmQr, 13, 1.1, 1, |t| (t + 0.4).sin() * t.cos());
        let base = solve_square(&sys).unwrap();
        let mut scaled = sys.clone();
        scaled.rhs *= -3.5;
        let res = solve_square(&scaled).unwrap();
        let rel = (&res.coeffs - &base.coeffs * -3.5).amax() / (3.5 * base.coeffs.amax());
        assert!(rel < 1e-12);
    }
}
