//! Basis-function families: raw DSM and MFS kernels, the trigonometric
//! factorization `B D F` of the dipole kernel, its QR reconditioning and the
//! explicit DSM-QR functions `ψ_k`.
//!
//! Basis indices `k` are 1-based throughout the public API (`k = 1` is the
//! constant function). Storage is 0-based, so column `k - 1` of a matrix
//! holds basis function `k`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::complexgeom::{ComplexValue, ConformalMap, PointLayout};
use crate::error::{Error, Result};

/// Distances below this are treated as a source/evaluation coincidence.
const SINGULARITY_GUARD: f64 = 1e-300;

/// Problem parameters shared by every basis and matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskParams {
    /// Radius of the boundary circle (1 for map geometries).
    pub rho: f64,
    /// Radius of the circle carrying the singular points.
    pub radius: f64,
    /// `ρ / R`.
    pub kappa: f64,
    /// Number of sources `N` (odd, ≥ 3).
    pub n: usize,
    /// Truncation order `M` of the series expansion, `2M + 1 > N`.
    pub m: usize,
    /// Oversampling factor, `P = αN`.
    pub alpha: usize,
    /// Number of collocation points.
    pub p: usize,
}

impl DiskParams {
    /// Parameters with the default truncation `M = N − 1`.
    pub fn new(rho: f64, radius: f64, n: usize, alpha: usize) -> Result<Self> {
        Self::with_order(rho, radius, n, n.saturating_sub(1), alpha)
    }

    pub fn with_order(rho: f64, radius: f64, n: usize, m: usize, alpha: usize) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "N must be odd and at least 3, got {n}"
            )));
        }
        if !(rho > 0.0 && radius > rho && radius.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < rho < R, got rho = {rho}, R = {radius}"
            )));
        }
        if 2 * m < n {
            return Err(Error::invalid(format!(
                "need 2M + 1 > N, got M = {m}, N = {n}"
            )));
        }
        if alpha == 0 {
            return Err(Error::invalid("alpha must be at least 1"));
        }
        Ok(DiskParams {
            rho,
            radius,
            kappa: rho / radius,
            n,
            m,
            alpha,
            p: alpha * n,
        })
    }

    /// Number of sine/cosine pairs in the DSM-QR basis, `(N − 1)/2`.
    pub fn half(&self) -> usize {
        (self.n - 1) / 2
    }

    fn require_default_order(&self) -> Result<()> {
        if self.m != self.n - 1 {
            return Err(Error::invalid(format!(
                "closed-form basis needs M = N - 1, got M = {}, N = {}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// `−Re(ν / (z − ζ))`, the dipole kernel without its `1/(2π)` prefactor.
pub(crate) fn dipole_quotient(
    z: ComplexValue,
    zeta: ComplexValue,
    nu: ComplexValue,
) -> Result<f64> {
    let diff = z - zeta;
    if diff.norm() < SINGULARITY_GUARD {
        return Err(Error::Singularity);
    }
    Ok(-(nu / diff).re)
}

/// Normal derivative of the fundamental solution, `−(1/2π) Re(ν / (z − ζ))`.
pub fn dipole_kernel(z: ComplexValue, zeta: ComplexValue, nu: ComplexValue) -> Result<f64> {
    Ok(dipole_quotient(z, zeta, nu)? / TAU)
}

/// Fundamental solution `−(1/2π) log|z − ζ|`.
pub fn mfs_kernel(z: ComplexValue, zeta: ComplexValue) -> Result<f64> {
    let dist = (z - zeta).norm();
    if dist < SINGULARITY_GUARD {
        return Err(Error::Singularity);
    }
    Ok(-dist.ln() / TAU)
}

/// `F(s, θ) = (1, s sin θ, s cos θ, …, s^M sin Mθ, s^M cos Mθ)`.
pub fn build_f(s: f64, theta: f64, m: usize) -> DVector<f64> {
    let mut f = DVector::zeros(2 * m + 1);
    f[0] = 1.0;
    let mut sp = 1.0;
    for order in 1..=m {
        sp *= s;
        let (sin, cos) = (order as f64 * theta).sin_cos();
        f[2 * order - 1] = sp * sin;
        f[2 * order] = sp * cos;
    }
    f
}

/// `B`: row `k` is `F(1, 2πk/N)`, `k = 1..=N`.
pub fn build_b(n: usize, m: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, 2 * m + 1);
    for k in 1..=n {
        let row = build_f(1.0, TAU * k as f64 / n as f64, m);
        b.row_mut(k - 1).copy_from(&row.transpose());
    }
    b
}

/// Diagonal of `D = diag(1, κ, κ, …, κ^M, κ^M)`.
pub fn build_d(kappa: f64, m: usize) -> DVector<f64> {
    let mut d = DVector::zeros(2 * m + 1);
    d[0] = 1.0;
    for order in 1..=m {
        let kp = kappa.powi(order as i32);
        d[2 * order - 1] = kp;
        d[2 * order] = kp;
    }
    d
}

/// Householder QR of `B` normalized to a strictly positive diagonal of `R`.
///
/// For an `N × (2M+1)` input, `Q` is `N × N` and `R` is `N × (2M+1)`.
pub fn qr_positive(b: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = b.shape();
    if cols < rows {
        return Err(Error::Factorization(format!(
            "need at least as many columns as rows, got {rows}x{cols}"
        )));
    }
    let qr = b.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();

    let scale = (0..rows).fold(0.0f64, |acc, i| acc.max(r[(i, i)].abs()));
    let tol = scale * rows as f64 * f64::EPSILON;
    for i in 0..rows {
        if r[(i, i)].abs() <= tol {
            return Err(Error::Factorization(format!(
                "leading block is rank deficient at column {i}"
            )));
        }
        if r[(i, i)] < 0.0 {
            r.row_mut(i).neg_mut();
            q.column_mut(i).neg_mut();
        }
    }
    Ok((q, r))
}

/// Closed-form QR factors of `B` for odd `N` and `M = N − 1`.
///
/// Columns of `Q` are the normalized samples `c_0/√N, s_1/√(N/2),
/// c_1/√(N/2), …`; `R = √(N/2) [diag(√2, 1, …, 1) | ±1 anti-diagonal]`,
/// the anti-diagonal entries folding `s_{N−l} = −s_l` and `c_{N−l} = c_l`
/// back onto the leading columns.
pub fn analytic_qr(n: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "analytic QR needs odd N >= 3, got {n}"
        )));
    }
    let half = (n - 1) / 2;
    let nf = n as f64;
    let col_scale = (nf / 2.0).sqrt();

    let mut q = DMatrix::zeros(n, n);
    for k in 1..=n {
        let phi = TAU * k as f64 / nf;
        q[(k - 1, 0)] = 1.0 / nf.sqrt();
        for l in 1..=half {
            let (sin, cos) = (l as f64 * phi).sin_cos();
            q[(k - 1, 2 * l - 1)] = sin / col_scale;
            q[(k - 1, 2 * l)] = cos / col_scale;
        }
    }

    let mut r = DMatrix::zeros(n, 2 * n - 1);
    r[(0, 0)] = nf.sqrt();
    for i in 1..n {
        r[(i, i)] = col_scale;
    }
    for l in 1..=half {
        // s_{N-l} lives in column 2(N-l)-1, c_{N-l} in column 2(N-l)
        r[(2 * l - 1, 2 * (n - l) - 1)] = -col_scale;
        r[(2 * l, 2 * (n - l))] = col_scale;
    }
    Ok((q, r))
}

/// Explicit DSM-QR basis function `ψ_k(s, θ)`, `k = 1..=N`.
///
/// `ψ_1 = √N`; for `k = 2m` and `k = 2m + 1`
/// `√(N/2)[s^m sin mθ − κ^{N−2m} s^{N−m} sin (N−m)θ]` and
/// `√(N/2)[s^m cos mθ + κ^{N−2m} s^{N−m} cos (N−m)θ]`.
pub fn psi_eval(k: usize, s: f64, theta: f64, params: &DiskParams) -> Result<f64> {
    params.require_default_order()?;
    let n = params.n;
    if k == 0 || k > n {
        return Err(Error::invalid(format!(
            "basis index {k} out of range 1..={n}"
        )));
    }
    if k == 1 {
        return Ok((n as f64).sqrt());
    }
    let m = k / 2;
    let weight = params.kappa.powi((n - 2 * m) as i32);
    let low = s.powi(m as i32);
    let high = weight * s.powi((n - m) as i32);
    let scale = (n as f64 / 2.0).sqrt();
    let value = if k.is_multiple_of(2) {
        low * (m as f64 * theta).sin() - high * ((n - m) as f64 * theta).sin()
    } else {
        low * (m as f64 * theta).cos() + high * ((n - m) as f64 * theta).cos()
    };
    Ok(scale * value)
}

/// Factor matrices of the numerically reconditioned basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorMatrices {
    pub b: DMatrix<f64>,
    /// Diagonal of `D`.
    pub d: DVector<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
    /// `D_N⁻¹ R D`.
    pub r_tilde: DMatrix<f64>,
}

impl FactorMatrices {
    /// All `N` basis values `R̃ F(s, θ)` at one point.
    pub fn eval(&self, s: f64, theta: f64) -> DVector<f64> {
        let m = (self.d.len() - 1) / 2;
        &self.r_tilde * build_f(s, theta, m)
    }
}

/// Numeric DSM-QR basis: `Ψ(s, θ) = D_N⁻¹ R D F(s, θ)` with `R` from
/// [`qr_positive`]. Works for any `M` with `2M + 1 > N`.
pub fn dsmqr_basis_numeric(params: &DiskParams) -> Result<FactorMatrices> {
    let b = build_b(params.n, params.m);
    let d = build_d(params.kappa, params.m);
    let (q, r) = qr_positive(&b)?;
    let mut r_tilde = r.clone();
    for (i, mut row) in r_tilde.row_iter_mut().enumerate() {
        let inv_row = 1.0 / d[i];
        for (j, v) in row.iter_mut().enumerate() {
            *v *= inv_row * d[j];
        }
    }
    Ok(FactorMatrices {
        b,
        d,
        q,
        r,
        r_tilde,
    })
}

/// Conformally corrected basis function for Jordan regions.
///
/// Adds to `ψ_k(s, θ)` the difference between the dipole kernel of the
/// mapped source `ζ_k` with moment `ν(ζ_k)` evaluated at `Ψ(ρ s e^{iθ})` and
/// the disk kernel of `R ω^k` evaluated at the preimage. The difference is
/// scaled by `R`, the factor relating the disk kernel to its series form,
/// so that it carries the same normalization as `ψ_k`.
pub fn jordan_basis_eval(
    k: usize,
    s: f64,
    theta: f64,
    map: &ConformalMap,
    layout: &PointLayout,
    params: &DiskParams,
) -> Result<f64> {
    let psi = psi_eval(k, s, theta, params)?;
    if map.is_identity() {
        return Ok(psi);
    }
    Ok(jordan_correction(k, s, theta, map, layout, params)? + psi)
}

pub(crate) fn jordan_correction(
    k: usize,
    s: f64,
    theta: f64,
    map: &ConformalMap,
    layout: &PointLayout,
    params: &DiskParams,
) -> Result<f64> {
    let idx = k - 1;
    let preimage = Complex64::from_polar(params.rho * s, theta);
    let physical = map.eval(preimage)?;
    let mapped = dipole_quotient(physical, layout.singular[idx], layout.moments[idx])?;
    let unit = Complex64::cis(layout.singular_angles[idx]);
    let disk = dipole_quotient(preimage, unit * params.radius, unit)?;
    Ok(params.radius * (mapped - disk))
}
