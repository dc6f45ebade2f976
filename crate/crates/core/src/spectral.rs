//! Fourier analysis of boundary data and the spectral description of the
//! DSM-QR disk solution.
//!
//! For boundary data `f(ρe^{iθ}) = Σ f_n e^{inθ}` the DSM-QR solution is
//! `u^(N) = Σ f_n φ_n`, where the transfer function `φ_n` depends only on
//! the residue of `n` modulo `N`. Comparing `φ_n` with the exact mode
//! `w^n` on the boundary yields the a-priori error bound
//! `‖u − u^(N)‖ ≤ Σ |f_n| g_n`.

use std::f64::consts::TAU;
use std::path::Path;

use num_complex::Complex64;

use crate::basis::DiskParams;
use crate::error::{Error, Result};

/// Truncated Fourier series `Σ_{|n| ≤ K} f_n e^{inθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    k: usize,
    coeffs: Vec<Complex64>,
    real: bool,
}

/// Relative tolerance for recognising conjugate-symmetric coefficients.
const SYMMETRY_TOL: f64 = 1e-14;

impl FourierSeries {
    /// Series from coefficients `f_{−K}, …, f_K`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::invalid(
                "coefficient list must have odd length 2K + 1",
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("Fourier coefficients must be finite"));
        }
        let k = coeffs.len() / 2;
        let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let real = (0..=k).all(|n| {
            let (pos, neg) = (coeffs[k + n], coeffs[k - n]);
            (pos - neg.conj()).norm() <= SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE)
        });
        Ok(FourierSeries { k, coeffs, real })
    }

    /// Series from `(n, f_n)` pairs; missing modes are zero.
    pub fn from_modes(modes: &[(i64, Complex64)]) -> Result<Self> {
        let k = modes
            .iter()
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        let mut seen = vec![false; 2 * k + 1];
        for &(n, c) in modes {
            let idx = (n + k as i64) as usize;
            if seen[idx] {
                return Err(Error::invalid(format!("duplicate Fourier mode n = {n}")));
            }
            seen[idx] = true;
            coeffs[idx] = c;
        }
        Self::new(coeffs)
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.k
    }

    /// Whether the series is conjugate symmetric, i.e. represents real data.
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// `f_n`, zero outside `|n| ≤ K`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.k {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.k as i64) as usize]
    }

    /// `(n, f_n)` for `n = −K..=K`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k = self.k as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - k, c))
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        FourierSeries {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            real: self.real,
        }
    }

    /// `Σ f_n w^n + Σ f_{−n} w̄^n` by Horner's scheme, `|w| ≤ 1`.
    ///
    /// With `w = (r/ρ) e^{iθ}` this is the harmonic extension of the data.
    pub fn harmonic_extension(&self, w: Complex64) -> Complex64 {
        let k = self.k;
        let zero = Complex64::new(0.0, 0.0);
        let positive = self.coeffs[k..]
            .iter()
            .rev()
            .fold(zero, |acc, &c| acc * w + c);
        let wc = w.conj();
        let negative = self.coeffs[..k].iter().fold(zero, |acc, &c| (acc + c) * wc);
        positive + negative
    }

    /// `Σ f_n e^{inθ}`.
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        self.harmonic_extension(Complex64::cis(theta))
    }

    /// Parses `n, re, im` rows; a header line and `#` comments are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut modes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if lineno == 0 && fields.first().is_some_and(|f| f.parse::<i64>().is_err()) {
                continue;
            }
            if fields.len() != 3 {
                return Err(Error::invalid(format!(
                    "line {}: expected n,re,im",
                    lineno + 1
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::invalid(format!("line {}: bad number '{s}'", lineno + 1)))
            };
            let n = fields[0].parse::<i64>().map_err(|_| {
                Error::invalid(format!(
                    "line {}: bad mode index '{}'",
                    lineno + 1,
                    fields[0]
                ))
            })?;
            modes.push((n, Complex64::new(parse(fields[1])?, parse(fields[2])?)));
        }
        if modes.is_empty() {
            return Err(Error::invalid("no Fourier modes in input"));
        }
        Self::from_modes(&modes)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

/// Discrete Fourier coefficients of `L` samples at angles `2πj/L`.
///
/// Exact, up to rounding, for trigonometric polynomials of degree `≤ K`.
pub fn fourier_coeffs(samples: &[f64], k: usize) -> Result<FourierSeries> {
    let l = samples.len();
    if l < 2 * k + 2 {
        return Err(Error::TooFewPoints {
            needed: 2 * k + 2,
            got: l,
        });
    }
    let coeffs = (-(k as i64)..=k as i64)
        .map(|n| {
            samples
                .iter()
                .enumerate()
                .map(|(j, &v)| {
                    // reduce n·j mod L to keep the phase argument small
                    let phase = (n * j as i64).rem_euclid(l as i64) as f64;
                    Complex64::cis(-TAU * phase / l as f64) * v
                })
                .sum::<Complex64>()
                / l as f64
        })
        .collect();
    FourierSeries::new(coeffs)
}

/// `u(re^{iθ}) = Σ f_n (r/ρ)^{|n|} e^{inθ}` for real boundary data.
pub fn exact_disk_solution(fs: &FourierSeries, rho: f64, r: f64, theta: f64) -> f64 {
    let value = fs.harmonic_extension(Complex64::from_polar(r / rho, theta));
    debug_assert!(
        !fs.is_real()
            || value.im.abs() <= 1e-12 * (1.0 + fs.coeffs.iter().map(|c| c.norm()).sum::<f64>()),
        "imaginary part {} for real data",
        value.im
    );
    value.re
}

/// Residue class of `n` modulo `N` in the form used by `φ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue {
    /// `n ≡ 0`.
    Zero,
    /// `n ≡ m` with `1 ≤ m ≤ (N−1)/2`.
    Plus(usize),
    /// `n ≡ −m` with `1 ≤ m ≤ (N−1)/2`.
    Minus(usize),
}

pub fn residue(n: i64, big_n: usize) -> Residue {
    let r = n.rem_euclid(big_n as i64) as usize;
    if r == 0 {
        Residue::Zero
    } else if r <= (big_n - 1) / 2 {
        Residue::Plus(r)
    } else {
        Residue::Minus(big_n - r)
    }
}

/// Transfer function `φ_n(s, θ)`: the DSM-QR solution for data `e^{inθ}`.
///
/// With `w = s e^{iθ}` and `m` the reduced residue:
/// `1` if `n ≡ 0`, `(w^m + κ^{N−2m} w̄^{N−m}) / (1 + κ^{N−2m})` if `n ≡ m`,
/// and the complex conjugate of that if `n ≡ −m`.
pub fn phi_n(n: i64, params: &DiskParams, s: f64, theta: f64) -> Complex64 {
    let big_n = params.n;
    let (m, conjugate) = match residue(n, big_n) {
        Residue::Zero => return Complex64::new(1.0, 0.0),
        Residue::Plus(m) => (m, false),
        Residue::Minus(m) => (m, true),
    };
    let weight = params.kappa.powi((big_n - 2 * m) as i32);
    let w = Complex64::from_polar(s, theta);
    let value = (w.powu(m as u32) + w.conj().powu((big_n - m) as u32) * weight) / (1.0 + weight);
    if conjugate {
        value.conj()
    } else {
        value
    }
}

/// `g_n = sup_θ |e^{inθ} − φ_n(1, θ)|`.
///
/// Writing `n = ±m + qN`, the modulus depends on `θ` only through `t = Nθ`:
/// `|e^{iqt} − (1 + κ' e^{∓it}) / (1 + κ')|` with `κ' = κ^{N−2m}`. The
/// unaliased case `q = 0` has the exact value `2κ'/(1 + κ')`, `n = qN ≠ 0`
/// gives 2, and the remaining cases use a grid search in `t` followed by a
/// golden-section refinement around the best grid point.
pub fn g_n(n: i64, params: &DiskParams) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let big_n = params.n as i64;
    let (m, q) = match residue(n, params.n) {
        Residue::Zero => return 2.0,
        Residue::Plus(m) => (m, (n - m as i64) / big_n),
        Residue::Minus(m) => (m, -(n + m as i64) / big_n),
    };
    let weight = params.kappa.powi((params.n - 2 * m) as i32);
    if q == 0 {
        return 2.0 * weight / (1.0 + weight);
    }
    let deviation = |t: f64| {
        (Complex64::cis(q as f64 * t) - (1.0 + Complex64::cis(-t) * weight) / (1.0 + weight)).norm()
    };
    let points = 720.max(90 * (q.unsigned_abs() as usize + 1));
    let step = TAU / points as f64;
    let (best, _) = (0..points).map(|i| (i, deviation(step * i as f64))).fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
    );
    let center = step * best as f64;
    golden_max(deviation, center - step, center + step).min(2.0)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = f(x1);
        }
        if b - a < 1e-13 {
            break;
        }
    }
    f1.max(f2).max(f(a)).max(f(b))
}

/// `Σ_{|n| ≤ K} |f_n| g_n`, an upper bound for `‖u − u^(N)‖_∞` on the disk.
pub fn error_bound(fs: &FourierSeries, params: &DiskParams) -> f64 {
    fs.modes()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(n, c)| c.norm() * g_n(n, params))
        .sum()
}

/// Synthetic boundary data families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SyntheticData {
    /// `f_n = a^{|n|}`, `0 < a < 1`.
    Geometric(f64),
    /// `f_n = (1 + |n|)^{−α}`, `α > 1`.
    Algebraic(f64),
    /// `x²y³` on the unit circle.
    X2Y3,
}

/// Fourier series of a synthetic data family truncated at `K`.
///
/// `x²y³` is an exact trigonometric polynomial and always has `K = 5`:
/// `cos²θ sin³θ = sin θ/8 + sin 3θ/16 − sin 5θ/16`.
pub fn synthetic_data(kind: SyntheticData, k: usize) -> Result<FourierSeries> {
    match kind {
        SyntheticData::Geometric(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::invalid(format!(
                    "geometric decay needs 0 < a < 1, got {a}"
                )));
            }
            let coeffs = (-(k as i64)..=k as i64)
                .map(|n| Complex64::new(a.powi(n.unsigned_abs() as i32), 0.0))
                .collect();
            FourierSeries::new(coeffs)
        }
        SyntheticData::Algebraic(alpha) => {
            if !(alpha > 1.0 && alpha.is_finite()) {
                return Err(Error::invalid(format!(
                    "algebraic decay needs alpha > 1, got {alpha}"
                )));
            }
            let coeffs = (-(k as i64)..=k as i64)
                .map(|n| Complex64::new((1.0 + n.unsigned_abs() as f64).powf(-alpha), 0.0))
                .collect();
            FourierSeries::new(coeffs)
        }
        SyntheticData::X2Y3 => {
            let i = |v: f64| Complex64::new(0.0, v);
            FourierSeries::from_modes(&[
                (1, i(-1.0 / 16.0)),
                (-1, i(1.0 / 16.0)),
                (3, i(-1.0 / 32.0)),
                (-3, i(1.0 / 32.0)),
                (5, i(1.0 / 32.0)),
                (-5, i(-1.0 / 32.0)),
            ])
        }
    }
}
