//! Independent reference implementations used to cross-check the solver.
//!
//! Nothing here calls into the factorization or solve paths of the main
//! modules: matrices are plain row-major storage, QR is modified
//! Gram-Schmidt with reorthogonalization, and singular values come from a
//! cyclic two-sided Jacobi eigensolve of `AᵀA`. Everything is slow and
//! meant for small `N`.

mod verify;

pub use verify::{run_all, CheckOutcome};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::basis::DiskParams;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|l| self.get(i, l) * other.get(l, j))
                .sum()
        })
    }

    /// `max |a_ij − b_ij|`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, (a - b).abs()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Thin QR of a matrix with at least as many columns as rows, restricted
/// to the leading square block: `A = Q R` with `Q` orthogonal `rows × rows`
/// and `R` upper trapezoidal with positive diagonal.
///
/// Each new column is orthogonalized twice against the previous ones.
pub fn reference_qr(a: &DenseMatrix) -> Option<(DenseMatrix, DenseMatrix)> {
    let n = a.rows;
    if a.cols < n {
        return None;
    }
    let mut q_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut r = DenseMatrix::zeros(n, a.cols);
    for j in 0..n {
        let mut v = a.column(j);
        for _pass in 0..2 {
            for (i, qi) in q_cols.iter().enumerate() {
                let c = dot(qi, &v);
                r.set(i, j, r.get(i, j) + c);
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk -= c * qk;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm == 0.0 {
            return None;
        }
        r.set(j, j, norm);
        q_cols.push(v.iter().map(|x| x / norm).collect());
    }
    for j in n..a.cols {
        let col = a.column(j);
        for (i, qi) in q_cols.iter().enumerate() {
            r.set(i, j, dot(qi, &col));
        }
    }
    let q = DenseMatrix::from_fn(n, n, |i, j| q_cols[j][i]);
    Some((q, r))
}

/// Singular values of `A`, largest first, as square roots of the
/// eigenvalues of `AᵀA` from a cyclic Jacobi iteration.
///
/// Values below roughly `√ε · σ_max` are not resolved by this route.
pub fn reference_singular_values(a: &DenseMatrix) -> Vec<f64> {
    let mut m = a.transpose().matmul(a);
    let n = m.rows;
    let frob = m.data.iter().map(|v| v * v).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * frob {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m.get(k, p), m.get(k, q));
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let (mpk, mqk) = (m.get(p, k), m.get(q, k));
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
            }
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|i| m.get(i, i).max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// `(1, s sin θ, s cos θ, …, s^M sin Mθ, s^M cos Mθ)`.
fn series_row(s: f64, theta: f64, m: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for l in 1..=m {
        let p = s.powi(l as i32);
        row.push(p * (l as f64 * theta).sin());
        row.push(p * (l as f64 * theta).cos());
    }
    row
}

/// The DSM-QR basis built from scratch: `R̃ = D_N⁻¹ R D` with `R` from
/// [`reference_qr`] of the sampled series matrix.
pub fn reference_basis(params: &DiskParams) -> Option<DenseMatrix> {
    let (n, m) = (params.n, params.m);
    let b = DenseMatrix::from_fn(n, 2 * m + 1, |k, j| {
        series_row(1.0, TAU * (k + 1) as f64 / n as f64, m)[j]
    });
    let (_, r) = reference_qr(&b)?;
    let d = |j: usize| {
        if j == 0 {
            1.0
        } else {
            params.kappa.powi(j.div_ceil(2) as i32)
        }
    };
    Some(DenseMatrix::from_fn(n, 2 * m + 1, |i, j| {
        r.get(i, j) * d(j) / d(i)
    }))
}

/// `ψ_k(s, θ)` for all `k` from a precomputed [`reference_basis`].
pub fn reference_psi(r_tilde: &DenseMatrix, s: f64, theta: f64) -> Vec<f64> {
    let f = series_row(s, theta, (r_tilde.cols - 1) / 2);
    (0..r_tilde.rows)
        .map(|i| (0..r_tilde.cols).map(|j| r_tilde.get(i, j) * f[j]).sum())
        .collect()
}

/// Collocation matrix `G_jk = ψ_k(1, θ_j)` on `P = αN` uniform points.
pub fn reference_collocation(params: &DiskParams) -> Option<DenseMatrix> {
    let r_tilde = reference_basis(params)?;
    let rows: Vec<Vec<f64>> = (1..=params.p)
        .map(|j| reference_psi(&r_tilde, 1.0, TAU * j as f64 / params.p as f64))
        .collect();
    Some(DenseMatrix::from_fn(params.p, params.n, |j, k| rows[j][k]))
}

/// `GᵀG` formed by explicit summation.
pub fn brute_force_gram(params: &DiskParams) -> Option<DenseMatrix> {
    let g = reference_collocation(params)?;
    Some(g.transpose().matmul(&g))
}

/// Kind of a discrete trigonometric product sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigSum {
    /// `Σ sin mθ_j`; `n` is ignored.
    Sin,
    /// `Σ cos mθ_j`; `n` is ignored.
    Cos,
    CosCos,
    SinSin,
    SinCos,
}

impl TrigSum {
    pub const ALL: [TrigSum; 5] = [
        TrigSum::Sin,
        TrigSum::Cos,
        TrigSum::CosCos,
        TrigSum::SinSin,
        TrigSum::SinCos,
    ];
}

/// `Σ_{j=1}^{N} t₁(m θ_j) t₂(n θ_j)` (or the single-factor sum) with `θ_j = 2πj/N`, summed directly.
pub fn trig_sum(kind: TrigSum, m: i64, n: i64, big_n: usize) -> f64 {
    (1..=big_n)
        .map(|j| {
            let t = TAU * j as f64 / big_n as f64;
            let (a, b) = (m as f64 * t, n as f64 * t);
            match kind {
                TrigSum::Sin => a.sin(),
                TrigSum::Cos => a.cos(),
                TrigSum::CosCos => a.cos() * b.cos(),
                TrigSum::SinSin => a.sin() * b.sin(),
                TrigSum::SinCos => a.sin() * b.cos(),
            }
        })
        .sum()
}

/// Closed form of [`trig_sum`] via discrete orthogonality.
pub fn trig_sum_closed_form(kind: TrigSum, m: i64, n: i64, big_n: usize) -> f64 {
    let nn = big_n as i64;
    let delta = |k: i64| if k.rem_euclid(nn) == 0 { 1.0 } else { 0.0 };
    let half = big_n as f64 / 2.0;
    match kind {
        TrigSum::Sin => 0.0,
        TrigSum::Cos => big_n as f64 * delta(m),
        TrigSum::CosCos => half * (delta(m - n) + delta(m + n)),
        TrigSum::SinSin => half * (delta(m - n) - delta(m + n)),
        // sin(kθ_j) sums to zero over the grid for every integer k
        TrigSum::SinCos => 0.0,
    }
}

/// Transfer function of mode `n` by brute force: solve the square
/// collocation system for the real and imaginary parts of `e^{inθ}` and
/// evaluate at `(s, θ)`.
pub fn brute_force_transfer(n: i64, params: &DiskParams, s: f64, theta: f64) -> Option<Complex64> {
    let square = DiskParams::with_order(params.rho, params.radius, params.n, params.m, 1).ok()?;
    let r_tilde = reference_basis(&square)?;
    let g = reference_collocation(&square)?;
    let angles: Vec<f64> = (1..=square.n)
        .map(|j| TAU * j as f64 / square.n as f64)
        .collect();
    let re: Vec<f64> = angles.iter().map(|t| (n as f64 * t).cos()).collect();
    let im: Vec<f64> = angles.iter().map(|t| (n as f64 * t).sin()).collect();
    let qr = gauss_solve(&g, &re)?;
    let qi = gauss_solve(&g, &im)?;
    let psi = reference_psi(&r_tilde, s, theta);
    Some(Complex64::new(dot(&qr, &psi), dot(&qi, &psi)))
}

/// Gaussian elimination with partial pivoting on a square matrix.
pub fn gauss_solve(a: &DenseMatrix, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return None;
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m.get(i, col).abs().total_cmp(&m.get(j, col).abs()))?;
        if m.get(piv, col) == 0.0 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(piv, j));
                m.set(piv, j, tmp);
            }
            x.swap(col, piv);
        }
        for row in col + 1..n {
            let f = m.get(row, col) / m.get(col, col);
            for j in col..n {
                m.set(row, j, m.get(row, j) - f * m.get(col, j));
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..n).rev() {
        let acc = x[row] - (row + 1..n).map(|j| m.get(row, j) * x[j]).sum::<f64>();
        x[row] = acc / m.get(row, row);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_reconstructs() {
        let a = DenseMatrix::from_fn(4, 6, |i, j| {
            ((i * 5 + j * 3) % 7) as f64 + 0.5 * (i == j) as u8 as f64
        });
        let (q, r) = reference_qr(&a).unwrap();
        assert!(q.matmul(&r).max_abs_diff(&a) < 1e-13);
        let qtq = q.transpose().matmul(&q);
        assert!(
            qtq.max_abs_diff(&DenseMatrix::from_fn(4, 4, |i, j| (i == j) as u8 as f64)) < 1e-14
        );
        for i in 0..4 {
            assert!(r.get(i, i) > 0.0);
            for j in 0..i {
                assert_eq!(r.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn singular_values_of_known_matrix() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| [[3.0, 0.0], [0.0, 4.0], [0.0, 0.0]][i][j]);
        let sv = reference_singular_values(&a);
        assert!((sv[0] - 4.0).abs() < 1e-14 && (sv[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn trig_sums_match_closed_form() {
        for big_n in [3usize, 5, 7, 9] {
            for m in -12..=12 {
                for n in -12..=12 {
                    for kind in TrigSum::ALL {
                        let d =
                            trig_sum(kind, m, n, big_n) - trig_sum_closed_form(kind, m, n, big_n);
                        assert!(d.abs() < 1e-12, "{kind:?} m={m} n={n} N={big_n}");
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_solve_small() {
        let a = DenseMatrix::from_fn(2, 2, |i, j| [[0.0, 1.0], [2.0, 1.0]][i][j]);
        let x = gauss_solve(&a, &[1.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(gauss_solve(&DenseMatrix::zeros(2, 2), &[1.0, 1.0]).is_none());
    }
}
