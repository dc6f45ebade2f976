//! Small dense kernels used on the solve path: partially pivoted LU with
//! pivot monitoring and a one-sided Jacobi singular value iteration.

use nalgebra::{DMatrix, DVector};

pub(crate) struct LuSolution {
    pub solution: DVector<f64>,
    /// Smallest `|pivot| / max|A_ij|` encountered during elimination.
    pub min_relative_pivot: f64,
}

/// Gaussian elimination with row pivoting.
///
/// Exactly zero pivots do not abort: the affected unknown is set to zero,
/// giving a best-effort solution for numerically singular systems.
pub(crate) fn lu_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> LuSolution {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    let mut lu = a.clone();
    let mut rhs = b.clone();
    let scale = a.amax();
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        let (offset, _) =
            lu.view((col, col), (n - col, 1))
                .iter()
                .enumerate()
                .fold((0, -1.0), |best, (i, v)| {
                    if v.abs() > best.1 {
                        (i, v.abs())
                    } else {
                        best
                    }
                });
        let piv = col + offset;
        if piv != col {
            lu.swap_rows(piv, col);
            rhs.swap_rows(piv, col);
        }
        let pivot = lu[(col, col)];
        let rel = if scale > 0.0 {
            pivot.abs() / scale
        } else {
            0.0
        };
        min_pivot = min_pivot.min(rel);
        if pivot == 0.0 {
            continue;
        }
        for row in col + 1..n {
            let factor = lu[(row, col)] / pivot;
            if factor == 0.0 {
                continue;
            }
            lu[(row, col)] = factor;
            for j in col + 1..n {
                let u = lu[(col, j)];
                lu[(row, j)] -= factor * u;
            }
            rhs[row] -= factor * rhs[col];
        }
    }

    let mut x = DVector::zeros(n);
    for row in (0..n).rev() {
        let pivot = lu[(row, row)];
        if pivot == 0.0 {
            continue;
        }
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc -= lu[(row, j)] * x[j];
        }
        x[row] = acc / pivot;
    }
    LuSolution {
        solution: x,
        min_relative_pivot: if n == 0 { 1.0 } else { min_pivot },
    }
}

/// Singular values by one-sided (Hestenes) Jacobi, sorted descending.
///
/// Column pairs are rotated until mutually orthogonal; this applies the
/// Jacobi rotations of `AᵀA` implicitly, so small singular values keep
/// accuracy relative to `σ_max · ε` instead of `σ_max · √ε`.
pub(crate) fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let work = if a.nrows() < a.ncols() {
        a.transpose()
    } else {
        a.clone()
    };
    let rows = work.nrows();
    let mut cols: Vec<Vec<f64>> = work
        .column_iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let n = cols.len();
    let tol = 1e-15;

    for _sweep in 0..80 {
        let mut norms: Vec<f64> = cols.iter().map(|c| dot(c, c)).collect();
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta) = (norms[p], norms[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for i in 0..rows {
                    let (x, y) = (cp[i], cq[i]);
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
                norms[p] = alpha - t * gamma;
                norms[q] = beta + t * gamma;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols.iter().map(|c| norm2(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_permuted_system() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let x_true = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let b = &a * &x_true;
        let out = lu_solve(&a, &b);
        assert!((out.solution - x_true).amax() < 1e-14);
        assert!(out.min_relative_pivot > 0.1);
    }

    #[test]
    fn lu_singular_is_best_effort() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let b = DVector::from_vec(vec![1.0, 2.0]);
        let out = lu_solve(&a, &b);
        assert_eq!(out.min_relative_pivot, 0.0);
        assert!(out.solution.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn jacobi_diagonal_and_orthogonal() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -3.0, 2.0]));
        assert_eq!(jacobi_singular_values(&d), vec![3.0, 2.0, 1.0]);
        let (c, s) = (0.6, 0.8);
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        for v in jacobi_singular_values(&rot) {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn jacobi_matches_nalgebra_svd() {
        let a = DMatrix::from_fn(9, 5, |i, j| {
            ((i * 7 + j * 3) % 11) as f64 - 4.5 + 0.1 * (i as f64 * j as f64).sin()
        });
        let ours = jacobi_singular_values(&a);
        let mut theirs: Vec<f64> = a
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-12 * theirs[0]);
        }
        let wide = jacobi_singular_values(&a.transpose());
        for (x, y) in wide.iter().zip(&ours) {
            assert!((x - y).abs() < 1e-12 * ours[0]);
        }
    }

    #[test]
    fn jacobi_resolves_tiny_singular_values() {
        // diag(1, 1e-12) rotated on both sides: the GᵀG route would lose σ_min
        let (c, s) = (0.8, 0.6);
        let u = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let v = DMatrix::from_row_slice(2, 2, &[c, s, -s, c]);
        let a = &u * DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-12])) * v.transpose();
        let sv = jacobi_singular_values(&a);
        assert!((sv[1] / 1e-12 - 1.0).abs() < 1e-3, "{sv:?}");
    }
}
