//! Line-oriented `key = value` experiment configuration.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::complexgeom::ConformalMap;
use crate::error::{Error, Result};
use crate::solver::Method;
use crate::spectral::{synthetic_data, FourierSeries, SyntheticData};

/// Boundary data selection.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    /// `f = x²y³` at the physical boundary point.
    X2Y3,
    /// `f_n = a^{|n|}` in the preimage angle.
    Geometric(f64),
    /// `f_n = (1 + |n|)^{−α}` in the preimage angle.
    Algebraic(f64),
    /// Fourier coefficients read from a `n,re,im` CSV file.
    File {
        path: PathBuf,
        series: FourierSeries,
    },
}

impl DataSpec {
    fn parse(value: &str, base: Option<&Path>) -> Result<Self> {
        let (kind, arg) = match value.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (value, None),
        };
        let number = |arg: Option<&str>| -> Result<f64> {
            arg.ok_or_else(|| config_err(format!("data kind '{kind}' needs a parameter")))?
                .parse()
                .map_err(|_| config_err(format!("bad data parameter in '{value}'")))
        };
        match kind {
            "x2y3" if arg.is_none() => Ok(DataSpec::X2Y3),
            "geometric" => {
                let a = number(arg)?;
                if !(a > 0.0 && a < 1.0) {
                    return Err(config_err(format!(
                        "geometric decay needs 0 < a < 1, got {a}"
                    )));
                }
                Ok(DataSpec::Geometric(a))
            }
            "algebraic" => {
                let alpha = number(arg)?;
                if !(alpha > 1.0 && alpha.is_finite()) {
                    return Err(config_err(format!(
                        "algebraic decay needs alpha > 1, got {alpha}"
                    )));
                }
                Ok(DataSpec::Algebraic(alpha))
            }
            "file" => {
                let raw = arg.ok_or_else(|| config_err("data = file: needs a path"))?;
                let mut path = PathBuf::from(raw);
                if path.is_relative() {
                    if let Some(base) = base {
                        path = base.join(path);
                    }
                }
                let series = FourierSeries::read_csv(&path)
                    .map_err(|e| config_err(format!("reading {}: {e}", path.display())))?;
                Ok(DataSpec::File { path, series })
            }
            _ => Err(config_err(format!("unknown data kind '{value}'"))),
        }
    }

    /// Fourier series of the data in the preimage angle, when one exists.
    ///
    /// `x²y³` has a finite series only on the disk, where it is the unit
    /// circle series scaled by `ρ⁵`. Synthetic families are truncated at
    /// `K = 8N`, extended for geometric decay until the tail drops below
    /// `1e−20`.
    pub fn series(&self, map: &ConformalMap, rho: f64, n: usize) -> Result<Option<FourierSeries>> {
        match self {
            DataSpec::X2Y3 if map.is_identity() => Ok(Some(
                synthetic_data(SyntheticData::X2Y3, 5)?.scaled(rho.powi(5)),
            )),
            DataSpec::X2Y3 => Ok(None),
            DataSpec::Geometric(a) => {
                let tail = (1e-20f64.ln() / a.ln()).ceil() as usize;
                Ok(Some(synthetic_data(
                    SyntheticData::Geometric(*a),
                    (8 * n).max(tail),
                )?))
            }
            DataSpec::Algebraic(alpha) => Ok(Some(synthetic_data(
                SyntheticData::Algebraic(*alpha),
                8 * n,
            )?)),
            DataSpec::File { series, .. } => Ok(Some(series.clone())),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            DataSpec::X2Y3 => "x2y3".into(),
            DataSpec::Geometric(a) => format!("geometric:{a}"),
            DataSpec::Algebraic(alpha) => format!("algebraic:{alpha}"),
            DataSpec::File { path, .. } => format!("file:{}", path.display()),
        }
    }
}

/// Boundary data resolved for one run: a function of the preimage angle.
#[derive(Debug, Clone)]
pub enum BoundaryData {
    Series(FourierSeries),
    /// `x²y³` at `Ψ(e^{iθ})`.
    X2Y3 {
        map: ConformalMap,
    },
}

impl BoundaryData {
    pub fn resolve(spec: &DataSpec, map: &ConformalMap, rho: f64, n: usize) -> Result<Self> {
        Ok(match spec.series(map, rho, n)? {
            Some(series) => BoundaryData::Series(series),
            None => BoundaryData::X2Y3 { map: map.clone() },
        })
    }

    /// `f` at preimage angle `θ`.
    pub fn value(&self, theta: f64) -> Result<f64> {
        match self {
            BoundaryData::Series(fs) => Ok(fs.evaluate(theta).re),
            BoundaryData::X2Y3 { map } => {
                let z = map.eval(Complex64::cis(theta))?;
                Ok(z.re * z.re * z.im.powi(3))
            }
        }
    }

    pub fn series(&self) -> Option<&FourierSeries> {
        match self {
            BoundaryData::Series(fs) => Some(fs),
            BoundaryData::X2Y3 { .. } => None,
        }
    }
}

/// A sweep over `N = 2l + 1`, `l = l_min..=l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: ConformalMap,
    pub methods: Vec<Method>,
    pub rho: f64,
    pub radius: f64,
    pub alpha: usize,
    pub l_min: usize,
    pub l_max: usize,
    pub data: DataSpec,
    /// Boundary residual samples; `None` means `10 P`.
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    /// Record wall-clock times. Off gives `wall_ms = 0` and byte-identical
    /// CSV across runs.
    pub timing: bool,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_geometry(value: &str) -> Result<ConformalMap> {
    let reals = |list: &str| -> Result<Vec<f64>> {
        list.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| config_err(format!("bad number '{s}' in geometry")))
            })
            .collect()
    };
    match value.split_once(':') {
        None => match value {
            "disk" => Ok(ConformalMap::Identity),
            "poly5" => Ok(ConformalMap::quintic_example()),
            "joukowski" => Ok(ConformalMap::joukowski_example()),
            _ => Err(config_err(format!("unknown geometry '{value}'"))),
        },
        Some(("poly", list)) => {
            let coeffs = reals(list)?
                .into_iter()
                .map(|c| Complex64::new(c, 0.0))
                .collect();
            ConformalMap::polynomial(coeffs).map_err(|e| config_err(e.to_string()))
        }
        Some(("joukowski", list)) => match reals(list)?.as_slice() {
            &[re, im] => Ok(ConformalMap::Joukowski {
                shift: Complex64::new(re, im),
            }),
            _ => Err(config_err("joukowski: expects two numbers (shift re, im)")),
        },
        Some(_) => Err(config_err(format!("unknown geometry '{value}'"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| config_err(format!("bad value for {key}: '{value}'")))
}

impl ExperimentConfig {
    /// Defaults for a geometry: the DSM and DSM-QR pair suited to it,
    /// `R = 1.5` with `l_max = 150` on the disk, and the example radii with
    /// `l_max = 100` for the maps.
    pub fn defaults(geometry: ConformalMap) -> Self {
        let (methods, radius, l_max) = match &geometry {
            ConformalMap::Identity => (vec![Method::Dsm, Method::DsmQr], 1.5, 150),
            ConformalMap::Polynomial { .. } => {
                (vec![Method::DsmJordan, Method::DsmQrJordan], 1.05, 100)
            }
            ConformalMap::Joukowski { .. } => {
                (vec![Method::DsmJordan, Method::DsmQrJordan], 1.1, 100)
            }
        };
        ExperimentConfig {
            geometry,
            methods,
            rho: 1.0,
            radius,
            alpha: 1,
            l_min: 1,
            l_max,
            data: DataSpec::X2Y3,
            samples: None,
            out: None,
            timing: true,
        }
    }

    /// Parses configuration text. Relative `file:` paths resolve against
    /// `base` when given.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if pairs.iter().any(|(k, _): &(&str, &str)| *k == key) {
                return Err(config_err(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            pairs.push((key, value));
        }

        let geometry = match pairs.iter().find(|(k, _)| *k == "geometry") {
            Some((_, v)) => parse_geometry(v)?,
            None => ConformalMap::Identity,
        };
        let mut config = Self::defaults(geometry);
        for (key, value) in pairs {
            match key {
                "geometry" => {}
                "rho" => config.rho = parse_num(key, value)?,
                "R" => config.radius = parse_num(key, value)?,
                "alpha" => config.alpha = parse_num(key, value)?,
                "l_min" => config.l_min = parse_num(key, value)?,
                "l_max" => config.l_max = parse_num(key, value)?,
                "methods" => {
                    config.methods = value
                        .split(',')
                        .map(|m| {
                            m.trim()
                                .parse::<Method>()
                                .map_err(|e| config_err(e.to_string()))
                        })
                        .collect::<Result<_>>()?;
                }
                "data" => config.data = DataSpec::parse(value, base)?,
                "samples" => config.samples = Some(parse_num(key, value)?),
                "out" => config.out = Some(PathBuf::from(value)),
                "timing" => {
                    config.timing = match value {
                        "on" | "true" => true,
                        "off" | "false" => false,
                        _ => {
                            return Err(config_err(format!(
                                "timing must be on or off, got '{value}'"
                            )))
                        }
                    }
                }
                _ => return Err(config_err(format!("unknown key '{key}'"))),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.radius > self.rho && self.radius.is_finite()) {
            return Err(config_err(format!(
                "need 0 < rho < R, got rho = {}, R = {}",
                self.rho, self.radius
            )));
        }
        if !self.geometry.is_identity() && self.rho != 1.0 {
            return Err(config_err("map geometries fix rho = 1"));
        }
        if self.alpha == 0 {
            return Err(config_err("alpha must be at least 1"));
        }
        if self.l_min == 0 || self.l_min > self.l_max {
            return Err(config_err(format!(
                "need 1 <= l_min <= l_max, got {}..{}",
                self.l_min, self.l_max
            )));
        }
        if self.methods.is_empty() {
            return Err(config_err("methods list is empty"));
        }
        if let Some(m) = self.methods.iter().find(|m| !m.supports(&self.geometry)) {
            return Err(config_err(format!(
                "method {m} does not support geometry {}",
                self.geometry
            )));
        }
        if let Some(samples) = self.samples {
            let p_max = self.alpha * (2 * self.l_max + 1);
            if samples < 2 * p_max {
                return Err(config_err(format!(
                    "samples = {samples} is below 2P = {}",
                    2 * p_max
                )));
            }
        }
        Ok(())
    }

    /// `N = 2l + 1` for each `l` in range.
    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        (self.l_min..=self.l_max).map(|l| 2 * l + 1)
    }

    /// Residual sample count for `P` collocation points.
    pub fn residual_samples(&self, p: usize) -> usize {
        self.samples.unwrap_or(10 * p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = ExperimentConfig::parse(
            "# disk sweep\nR = 1.1\nl_max = 5 # short\nmethods = dsm-qr, mfs\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.geometry, ConformalMap::Identity);
        assert_eq!(cfg.radius, 1.1);
        assert_eq!(cfg.methods, vec![Method::DsmQr, Method::Mfs]);
        assert_eq!(cfg.sizes().collect::<Vec<_>>(), vec![3, 5, 7, 9, 11]);
        assert_eq!(cfg.residual_samples(11), 110);

        let map = ExperimentConfig::parse("geometry = joukowski\n", None).unwrap();
        assert_eq!(map.radius, 1.1);
        assert_eq!(map.methods, vec![Method::DsmJordan, Method::DsmQrJordan]);
        let poly =
            ExperimentConfig::parse("geometry = poly5\ndata = geometric:0.5\n", None).unwrap();
        assert_eq!(poly.radius, 1.05);
        assert_eq!(poly.data, DataSpec::Geometric(0.5));
    }

    #[test]
    fn parametrized_geometries() {
        let cfg = ExperimentConfig::parse("geometry = poly:0,1,0,0.1\nR = 1.2\n", None).unwrap();
        assert_eq!(cfg.geometry.to_string(), "poly:0,1,0,0.1");
        let cfg = ExperimentConfig::parse("geometry = joukowski:0.1,-0.2\n", None).unwrap();
        assert_eq!(cfg.geometry.to_string(), "joukowski:0.1,-0.2");
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "colour = red\n",
            "R = 0.5\n",
            "geometry = square\n",
            "geometry = poly5\nmethods = dsm-qr\n",
            "l_min = 4\nl_max = 2\n",
            "data = geometric:1.5\n",
            "data = x2y3:1\n",
            "alpha = 0\n",
            "R\n",
            "R = 1.2\nR = 1.3\n",
            "samples = 10\nl_max = 10\n",
            "timing = maybe\n",
            "geometry = poly5\nrho = 0.5\nR = 1.05\n",
        ] {
            assert!(
                matches!(ExperimentConfig::parse(text, None), Err(Error::Config(_))),
                "{text:?}"
            );
        }
    }

    #[test]
    fn file_data_relative_to_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("modes.csv"),
            "n,re,im\n0,1,0\n1,0.5,0\n-1,0.5,0\n",
        )
        .unwrap();
        let cfg = ExperimentConfig::parse("data = file:modes.csv\n", Some(dir.path())).unwrap();
        let series = cfg
            .data
            .series(&ConformalMap::Identity, 1.0, 5)
            .unwrap()
            .unwrap();
        assert_eq!(series.order(), 1);
        assert!(ExperimentConfig::parse("data = file:missing.csv\n", Some(dir.path())).is_err());
    }

    #[test]
    fn boundary_values() {
        let disk = BoundaryData::resolve(&DataSpec::X2Y3, &ConformalMap::Identity, 2.0, 7).unwrap();
        let t = 0.7f64;
        let expected = 32.0 * t.cos().powi(2) * t.sin().powi(3);
        assert!((disk.value(t).unwrap() - expected).abs() < 1e-13);

        let map = ConformalMap::quintic_example();
        let jordan = BoundaryData::resolve(&DataSpec::X2Y3, &map, 1.0, 7).unwrap();
        assert!(jordan.series().is_none());
        let z = map.eval(Complex64::cis(t)).unwrap();
        assert_eq!(jordan.value(t).unwrap(), z.re * z.re * z.im.powi(3));
    }
}
