//! Conformal maps from the unit disk and the point layouts built on them.
//!
//! Every geometry is described by a map `Ψ` from a disk in the preimage
//! plane to the physical plane. The disk geometry uses the identity map;
//! Jordan regions use one of the closed-form maps below. Collocation points
//! are `Ψ(ρ e^{iθ_j})`, singular points `Ψ(R e^{iφ_k})`, and the dipole
//! moments are the outward unit normals to the image of `|z| = R`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Below this modulus the Joukowski variable `w` is treated as the pole.
const POLE_GUARD: f64 = 1e-300;

/// Below this modulus `Ψ'` is considered zero and the normal undefined.
const DEGENERATE_DERIVATIVE: f64 = 1e-14;

/// A closed-form conformal map `Ψ` from the preimage disk to the region.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalMap {
    /// `Ψ(z) = z`; the disk geometry.
    Identity,
    /// `Ψ(z) = Σ a_k z^k`, coefficients stored in increasing powers.
    Polynomial { coeffs: Vec<ComplexValue> },
    /// `Ψ(z) = w + 1/(2w)` with `w = z + shift`.
    Joukowski { shift: ComplexValue },
}

impl ConformalMap {
    /// Polynomial map from coefficients `a_0, a_1, …`. Requires `a_1 ≠ 0`.
    pub fn polynomial(coeffs: Vec<ComplexValue>) -> Result<Self> {
        match coeffs.get(1) {
            Some(a1) if a1.norm() > 0.0 => {}
            _ => {
                return Err(Error::invalid(
                    "polynomial map needs a nonzero linear coefficient",
                ))
            }
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        Ok(ConformalMap::Polynomial { coeffs })
    }

    /// `Ψ(z) = 4/5 z + 1/10 z⁵`.
    pub fn quintic_example() -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 6];
        coeffs[1] = Complex64::new(0.8, 0.0);
        coeffs[5] = Complex64::new(0.1, 0.0);
        ConformalMap::Polynomial { coeffs }
    }

    /// Joukowski map with `w = z − 1/5 + i/5`.
    pub fn joukowski_example() -> Self {
        ConformalMap::Joukowski {
            shift: Complex64::new(-0.2, 0.2),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, ConformalMap::Identity)
    }

    /// Short tag used in CSV output.
    pub fn tag(&self) -> &'static str {
        match self {
            ConformalMap::Identity => "disk",
            ConformalMap::Polynomial { .. } => "poly",
            ConformalMap::Joukowski { .. } => "joukowski",
        }
    }

    /// `Ψ(z)`.
    pub fn eval(&self, z: ComplexValue) -> Result<ComplexValue> {
        match self {
            ConformalMap::Identity => Ok(z),
            ConformalMap::Polynomial { coeffs } => Ok(horner(coeffs, z)),
            ConformalMap::Joukowski { shift } => {
                let w = z + shift;
                if w.norm() < POLE_GUARD {
                    return Err(Error::JoukowskiPole);
                }
                Ok(w + (2.0 * w).inv())
            }
        }
    }

    /// `Ψ'(z)`.
    pub fn derivative(&self, z: ComplexValue) -> Result<ComplexValue> {
        match self {
            ConformalMap::Identity => Ok(Complex64::new(1.0, 0.0)),
            ConformalMap::Polynomial { coeffs } => {
                let derived: Vec<ComplexValue> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| a * k as f64)
                    .collect();
                Ok(horner(&derived, z))
            }
            ConformalMap::Joukowski { shift } => {
                let w = z + shift;
                if w.norm() < POLE_GUARD {
                    return Err(Error::JoukowskiPole);
                }
                Ok(1.0 - (2.0 * w * w).inv())
            }
        }
    }

    /// Unit outward normal to the curve `Ψ(∂B_R)` at `Ψ(R e^{iφ})`.
    ///
    /// A conformal map rotates the circle's radial direction `e^{iφ}` by
    /// `arg Ψ'`, so the normal is `Ψ'(R e^{iφ}) e^{iφ} / |Ψ'(R e^{iφ})|`.
    pub fn image_normal(&self, radius: f64, phi: f64) -> Result<ComplexValue> {
        let radial = Complex64::cis(phi);
        let deriv = self.derivative(radial * radius)?;
        let modulus = deriv.norm();
        if modulus < DEGENERATE_DERIVATIVE {
            return Err(Error::DegenerateMap(modulus));
        }
        Ok(deriv * radial / modulus)
    }
}

impl fmt::Display for ConformalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConformalMap::Identity => write!(f, "disk"),
            ConformalMap::Polynomial { coeffs } => {
                write!(f, "poly:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c.re)?;
                }
                Ok(())
            }
            ConformalMap::Joukowski { shift } => write!(f, "joukowski:{},{}", shift.re, shift.im),
        }
    }
}

fn horner(coeffs: &[ComplexValue], z: ComplexValue) -> ComplexValue {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// `Ψ(z)`; free-function form of [`ConformalMap::eval`].
pub fn map_eval(map: &ConformalMap, z: ComplexValue) -> Result<ComplexValue> {
    map.eval(z)
}

/// `Ψ'(z)`; free-function form of [`ConformalMap::derivative`].
pub fn map_derivative(map: &ConformalMap, z: ComplexValue) -> Result<ComplexValue> {
    map.derivative(z)
}

pub fn image_normal(map: &ConformalMap, radius: f64, phi: f64) -> Result<ComplexValue> {
    map.image_normal(radius, phi)
}

/// Collocation points, singular points and dipole moments for one run.
///
/// Index `j` in storage corresponds to the 1-based point `j + 1`, so the
/// last collocation point sits at angle `2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointLayout {
    pub collocation: Vec<ComplexValue>,
    pub singular: Vec<ComplexValue>,
    pub moments: Vec<ComplexValue>,
    /// `θ_j = 2πj/P`, `j = 1..=P`.
    pub collocation_angles: Vec<f64>,
    /// `φ_k = 2πk/N`, `k = 1..=N`.
    pub singular_angles: Vec<f64>,
}

impl PointLayout {
    pub fn n_sources(&self) -> usize {
        self.singular.len()
    }

    pub fn n_collocation(&self) -> usize {
        self.collocation.len()
    }
}

/// Uniform angles `2πj/count` for `j = 1..=count`.
pub fn uniform_angles(count: usize) -> Vec<f64> {
    (1..=count).map(|j| TAU * j as f64 / count as f64).collect()
}

/// Builds the layout for `N` sources and `P` collocation points.
///
/// For map geometries the preimage boundary is the unit circle, so `rho`
/// must be 1 and `radius > 1`.
pub fn build_layout(
    map: &ConformalMap,
    n_sources: usize,
    n_collocation: usize,
    rho: f64,
    radius: f64,
) -> Result<PointLayout> {
    if n_sources < 3 || n_sources.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "number of sources must be odd and at least 3, got {n_sources}"
        )));
    }
    if n_collocation < n_sources {
        return Err(Error::invalid(format!(
            "need P >= N, got P = {n_collocation}, N = {n_sources}"
        )));
    }
    if !(rho > 0.0 && radius > rho) {
        return Err(Error::invalid(format!(
            "need 0 < rho < R, got rho = {rho}, R = {radius}"
        )));
    }
    if !map.is_identity() && rho != 1.0 {
        return Err(Error::invalid("map geometries fix rho = 1"));
    }

    let collocation_angles = uniform_angles(n_collocation);
    let singular_angles = uniform_angles(n_sources);

    let collocation = collocation_angles
        .iter()
        .map(|&t| map.eval(Complex64::from_polar(rho, t)))
        .collect::<Result<Vec<_>>>()?;
    let singular = singular_angles
        .iter()
        .map(|&p| map.eval(Complex64::from_polar(radius, p)))
        .collect::<Result<Vec<_>>>()?;
    let moments = singular_angles
        .iter()
        .map(|&p| map.image_normal(radius, p))
        .collect::<Result<Vec<_>>>()?;

    Ok(PointLayout {
        collocation,
        singular,
        moments,
        collocation_angles,
        singular_angles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    fn central_difference(map: &ConformalMap, z: ComplexValue, h: f64) -> ComplexValue {
        (map.eval(z + h).unwrap() - map.eval(z - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn identity_eval() {
        let z = c(0.3, 0.4);
        assert_eq!(ConformalMap::Identity.eval(z).unwrap(), z);
        assert_eq!(ConformalMap::Identity.derivative(z).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn quintic_at_one() {
        let v = ConformalMap::quintic_example().eval(c(1.0, 0.0)).unwrap();
        assert!((v - c(0.9, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn joukowski_pole() {
        let map = ConformalMap::joukowski_example();
        assert_eq!(map.eval(c(0.2, -0.2)), Err(Error::JoukowskiPole));
        assert_eq!(map.derivative(c(0.2, -0.2)), Err(Error::JoukowskiPole));
    }

    #[test]
    fn quintic_derivative_at_origin() {
        let map = ConformalMap::quintic_example();
        let d = map.derivative(c(0.0, 0.0)).unwrap();
        assert!((d - c(0.8, 0.0)).norm() < 1e-15);
        let fd = central_difference(&map, c(0.0, 0.0), 1e-6);
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn joukowski_derivative_value() {
        // w = 3/5, Ψ' = 1 − 1/(2w²) = 1 − 1/0.72
        let map = ConformalMap::joukowski_example();
        let z = c(0.8, -0.2);
        let d = map.derivative(z).unwrap();
        let expected = 1.0 - 1.0 / 0.72;
        assert!((d - c(expected, 0.0)).norm() < 1e-14);
        let fd = central_difference(&map, z, 1e-6);
        assert!((fd - d).norm() < 1e-8);
    }

    #[test]
    fn circle_normal_is_radial() {
        let n = ConformalMap::Identity.image_normal(1.5, FRAC_PI_2).unwrap();
        assert!((n - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn quintic_normal_on_real_axis() {
        let n = ConformalMap::quintic_example()
            .image_normal(1.05, 0.0)
            .unwrap();
        assert!((n - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_normal() {
        // Ψ'(z) = 1 − z vanishes at z = 1
        let map = ConformalMap::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(matches!(
            map.image_normal(1.0, 0.0),
            Err(Error::DegenerateMap(_))
        ));
    }

    #[test]
    fn polynomial_requires_linear_term() {
        assert!(ConformalMap::polynomial(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(ConformalMap::polynomial(vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn disk_layout_last_points() {
        let layout = build_layout(&ConformalMap::Identity, 3, 3, 1.0, 1.5).unwrap();
        assert!((layout.singular[2] - c(1.5, 0.0)).norm() < 1e-15);
        assert!((layout.moments[2] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((layout.collocation[2] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn quintic_layout_last_source() {
        let map = ConformalMap::quintic_example();
        let layout = build_layout(&map, 3, 3, 1.0, 1.05).unwrap();
        let expected = 0.8 * 1.05 + 0.1 * 1.05f64.powi(5);
        assert!((layout.singular[2] - c(expected, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn even_source_count_rejected() {
        let err = build_layout(&ConformalMap::Identity, 4, 4, 1.0, 1.5).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn map_geometry_requires_unit_rho() {
        assert!(build_layout(&ConformalMap::quintic_example(), 5, 5, 0.5, 1.05).is_err());
    }

    #[test]
    fn identity_layout_matches_disk_formulas() {
        let (n, p, rho, r) = (7, 14, 0.7, 1.3);
        let layout = build_layout(&ConformalMap::Identity, n, p, rho, r).unwrap();
        for j in 1..=p {
            let z = Complex64::from_polar(rho, TAU * j as f64 / p as f64);
            assert!((layout.collocation[j - 1] - z).norm() <= 1e-15);
            assert!((layout.collocation[j - 1].norm() - rho).abs() <= 1e-12 * r);
        }
        for k in 1..=n {
            let w = Complex64::cis(TAU * k as f64 / n as f64);
            assert!((layout.singular[k - 1] - w * r).norm() <= 1e-15);
            assert!((layout.moments[k - 1] - w).norm() <= 1e-15);
            assert!((layout.singular[k - 1].norm() - r).abs() <= 1e-12 * r);
        }
    }

    fn example_maps() -> Vec<(ConformalMap, f64)> {
        vec![
            (ConformalMap::quintic_example(), 1.05),
            (ConformalMap::joukowski_example(), 1.1),
        ]
    }

    #[test]
    fn normals_have_unit_modulus_and_point_outward() {
        let eps = 1e-4;
        for (map, r) in example_maps() {
            for i in 0..100 {
                let phi = 2.0 * PI * i as f64 / 100.0;
                let n = map.image_normal(r, phi).unwrap();
                assert!((n.norm() - 1.0).abs() < 1e-12);
                let base = Complex64::from_polar(r, phi);
                let outward =
                    (map.eval(base * (1.0 + eps)).unwrap() - map.eval(base).unwrap()) / eps;
                let dot = n.re * outward.re + n.im * outward.im;
                assert!(dot > 0.0, "inward normal for {map} at phi = {phi}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for (map, r) in example_maps() {
            for i in 0..100 {
                let z = Complex64::from_polar(r, 2.0 * PI * i as f64 / 100.0);
                let d = map.derivative(z).unwrap();
                let fd = central_difference(&map, z, 1e-6);
                assert!((fd - d).norm() / d.norm() < 1e-7, "{map} at {z}");
            }
        }
    }
}
