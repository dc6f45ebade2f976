//! CSV and `key=value` rendering of sweep rows, and basis tabulation.

use std::f64::consts::TAU;
use std::io::{self, Write};

use super::sweep::SweepRow;
use crate::error::Result;
use crate::solver::Basis;

pub const CSV_HEADER: &str =
    "method,geometry,N,P,rho,R,kappa,cond2,cond2_closed_form,residual_linf,\
interior_error_linf,bound_value,coeff_max,wall_ms,note";

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

fn fields(row: &SweepRow) -> Vec<(&'static str, String)> {
    vec![
        ("method", row.method.tag().to_string()),
        ("geometry", row.geometry.clone()),
        ("N", row.n.to_string()),
        ("P", row.p.to_string()),
        ("rho", real(row.rho)),
        ("R", real(row.radius)),
        ("kappa", real(row.kappa)),
        ("cond2", row.cond2.to_string()),
        ("cond2_closed_form", optional(row.cond2_closed_form)),
        ("residual_linf", optional(row.residual_linf)),
        ("interior_error_linf", optional(row.interior_error_linf)),
        ("bound_value", optional(row.bound_value)),
        ("coeff_max", optional(row.coeff_max)),
        ("wall_ms", real(row.wall_ms)),
        // notes are free text; keep the column count fixed
        ("note", row.note.replace([',', '\n', '\r'], ";")),
    ]
}

pub fn write_csv<W: Write>(out: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let line: Vec<String> = fields(row).into_iter().map(|(_, v)| v).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// One `key=value` line per field.
pub fn write_key_values<W: Write>(out: &mut W, row: &SweepRow) -> io::Result<()> {
    for (key, value) in fields(row) {
        writeln!(out, "{key}={value}")?;
    }
    Ok(())
}

/// Rows `(k, s, θ, b_k(s, θ))` on a polar grid: `radial` radii `s = i/(radial − 1)`
/// and `angular` angles `2πj/angular`.
pub fn basis_dump(
    basis: &Basis<'_>,
    radial: usize,
    angular: usize,
) -> Result<Vec<(usize, f64, f64, f64)>> {
    let mut rows = Vec::new();
    for i in 0..radial {
        let s = if radial > 1 {
            i as f64 / (radial - 1) as f64
        } else {
            1.0
        };
        for j in 0..angular {
            let theta = TAU * j as f64 / angular as f64;
            for (k, value) in basis.eval_all(s, theta)?.into_iter().enumerate() {
                rows.push((k + 1, s, theta, value));
            }
        }
    }
    rows.sort_by_key(|r| r.0);
    Ok(rows)
}

pub fn write_basis_dump<W: Write>(out: &mut W, rows: &[(usize, f64, f64, f64)]) -> io::Result<()> {
    writeln!(out, "k,s,theta,value")?;
    for &(k, s, theta, value) in rows {
        writeln!(out, "{k},{},{},{}", real(s), real(theta), real(value))?;
    }
    Ok(())
}
