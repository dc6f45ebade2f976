//! The self-check battery run by `dsmqr verify`.

use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;

use super::*;
use crate::basis::{analytic_qr, build_b, psi_eval, qr_positive, DiskParams};
use crate::complexgeom::{build_layout, ConformalMap};
use crate::solver::{
    assemble, cond2_closed_form, gram_diagonal_closed_form, singular_values, Method,
};
use crate::spectral::{fourier_coeffs, phi_n, synthetic_data, SyntheticData};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst.is_finite() && worst <= tol,
        detail: format!("max deviation {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn to_dense(m: &DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn odd_sizes(max: usize) -> impl Iterator<Item = usize> {
    (3..=max).step_by(2)
}

/// Runs every cross-check and reports each result.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        check_numeric_qr(),
        check_analytic_qr(),
        check_psi(),
        check_gram(),
        check_singular_values(),
        check_cond2(),
        check_quadrature(),
        check_trig_sums(),
        check_transfer(),
    ]
}

fn check_numeric_qr() -> CheckOutcome {
    let worst = odd_sizes(41)
        .map(|n| {
            let b = build_b(n, n - 1);
            let Ok((q, r)) = qr_positive(&b) else {
                return f64::INFINITY;
            };
            let Some((q_ref, r_ref)) = reference_qr(&to_dense(&b)) else {
                return f64::INFINITY;
            };
            to_dense(&q)
                .max_abs_diff(&q_ref)
                .max(to_dense(&r).max_abs_diff(&r_ref))
        })
        .fold(0.0, f64::max);
    outcome("householder QR vs Gram-Schmidt", worst, 1e-11)
}

fn check_analytic_qr() -> CheckOutcome {
    let worst = odd_sizes(41)
        .map(|n| {
            let b = build_b(n, n - 1);
            let Ok((q, r)) = analytic_qr(n) else {
                return f64::INFINITY;
            };
            let Some((q_ref, r_ref)) = reference_qr(&to_dense(&b)) else {
                return f64::INFINITY;
            };
            to_dense(&q)
                .max_abs_diff(&q_ref)
                .max(to_dense(&r).max_abs_diff(&r_ref))
        })
        .fold(0.0, f64::max);
    outcome("analytic QR vs Gram-Schmidt", worst, 1e-11)
}

fn check_psi() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for n in odd_sizes(21) {
        let Ok(params) = DiskParams::new(1.0, 1.5, n, 1) else {
            return outcome("closed-form basis", f64::INFINITY, 0.0);
        };
        let Some(r_tilde) = reference_basis(&params) else {
            return outcome("closed-form basis", f64::INFINITY, 0.0);
        };
        for i in 0..8 {
            for j in 0..8 {
                let (s, t) = (i as f64 / 7.0, TAU * j as f64 / 8.0 + 0.1);
                let reference = reference_psi(&r_tilde, s, t);
                for (k, r) in reference.iter().enumerate() {
                    let closed = psi_eval(k + 1, s, t, &params).unwrap_or(f64::INFINITY);
                    worst = worst.max((closed - r).abs());
                }
            }
        }
    }
    outcome("closed-form basis vs reference factorization", worst, 1e-10)
}

fn disk_matrix(n: usize, radius: f64, alpha: usize) -> Option<(DiskParams, DMatrix<f64>)> {
    let params = DiskParams::new(1.0, radius, n, alpha).ok()?;
    let layout = build_layout(&ConformalMap::Identity, n, params.p, 1.0, radius).ok()?;
    let zeros = vec![0.0; params.p];
    let system = assemble(
        Method::DsmQr,
        &params,
        &layout,
        &ConformalMap::Identity,
        &zeros,
    )
    .ok()?;
    Some((params, system.g))
}

fn check_gram() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for n in odd_sizes(41) {
        let Some((params, _)) = disk_matrix(n, 1.5, 1) else {
            return outcome("Gram matrix", f64::INFINITY, 0.0);
        };
        let Some(gram) = brute_force_gram(&params) else {
            return outcome("Gram matrix", f64::INFINITY, 0.0);
        };
        let diag = gram_diagonal_closed_form(&params);
        let scale = (n * n) as f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { diag[i] } else { 0.0 };
                worst = worst.max((gram.get(i, j) - expected).abs() / scale);
            }
        }
    }
    outcome(
        "Gram matrix vs closed-form diagonal (relative to N^2)",
        worst,
        1e-12,
    )
}

fn check_singular_values() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for n in odd_sizes(25) {
        for alpha in [1, 2] {
            let Some((_, g)) = disk_matrix(n, 1.5, alpha) else {
                return outcome("singular values", f64::INFINITY, 0.0);
            };
            let ours = singular_values(&g);
            let reference = reference_singular_values(&to_dense(&g));
            for (a, b) in ours.iter().zip(&reference) {
                worst = worst.max((a - b).abs() / reference[0]);
            }
        }
    }
    outcome("one-sided Jacobi vs Gram eigenvalues", worst, 1e-12)
}

fn check_cond2() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for n in odd_sizes(41) {
        for radius in [1.1, 1.5, 3.0] {
            let Some((params, g)) = disk_matrix(n, radius, 1) else {
                return outcome("cond2", f64::INFINITY, 0.0);
            };
            let reference = reference_singular_values(&to_dense(&g));
            let measured = reference[0] / reference[reference.len() - 1];
            let closed = cond2_closed_form(&params);
            worst = worst.max((measured - closed).abs() / closed);
        }
    }
    outcome("cond2 vs 2/(1 + kappa^(N-2))", worst, 1e-10)
}

fn check_quadrature() -> CheckOutcome {
    let samples: Vec<f64> = (0..64)
        .map(|j| {
            let t = TAU * j as f64 / 64.0;
            t.cos().powi(2) * t.sin().powi(3)
        })
        .collect();
    let worst = match (
        fourier_coeffs(&samples, 8),
        synthetic_data(SyntheticData::X2Y3, 5),
    ) {
        (Ok(quad), Ok(exact)) => (-8..=8)
            .map(|n| (quad.coeff(n) - exact.coeff(n)).norm())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    outcome("x^2 y^3 Fourier coefficients by quadrature", worst, 1e-13)
}

fn check_trig_sums() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for big_n in odd_sizes(15) {
        for m in -20..=20 {
            for n in -20..=20 {
                for kind in TrigSum::ALL {
                    let d = trig_sum(kind, m, n, big_n) - trig_sum_closed_form(kind, m, n, big_n);
                    worst = worst.max(d.abs());
                }
            }
        }
    }
    outcome("discrete trigonometric orthogonality", worst, 1e-12)
}

fn check_transfer() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for big_n in [3usize, 7, 11] {
        let Ok(params) = DiskParams::new(1.0, 1.5, big_n, 1) else {
            return outcome("transfer", f64::INFINITY, 0.0);
        };
        for n in -(3 * big_n as i64)..=3 * big_n as i64 {
            for (s, t) in [(0.0, 0.0), (0.5, 0.3), (0.9, 2.0), (1.0, 4.4)] {
                let Some(brute) = brute_force_transfer(n, &params, s, t) else {
                    return outcome("transfer", f64::INFINITY, 0.0);
                };
                worst = worst.max((brute - phi_n(n, &params, s, t)).norm());
            }
        }
    }
    outcome("transfer functions vs brute-force solves", worst, 1e-10)
}
