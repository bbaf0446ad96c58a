use std::str::FromStr;
use std::sync::Arc;

use hamstat::geometry::{AxisymPolynomial, HarmonicCubic, PotentialField, Quadratic};
use hamstat::singular::{cauchy_jet_solve, default_radius, model_potential, FamilyIndex, DEFAULT_RADIUS};
use serde::Serialize;

use crate::error::CliError;

/// Potential named on the command line, e.g. `model:n=3,k=1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PotentialSpec {
    Model { n: usize, k: usize, rho: Option<f64> },
    Quadratic { c: f64, radius: f64 },
    HarmonicCubic { radius: f64 },
    Jet { n: usize, k: usize, order: usize, rho: f64 },
}

struct Fields<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for item in body.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("malformed field '{item}' in potential '{spec}'")))?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Self { spec, pairs })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.pairs.iter().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::usage(format!("bad value '{v}' for '{key}' in potential '{}'", self.spec))),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::usage(format!("potential '{}' needs '{key}='", self.spec)))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), CliError> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(CliError::usage(format!("unknown field '{k}' in potential '{}'", self.spec))),
            None => Ok(()),
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        let f = Fields::parse(s, body)?;
        match name {
            "model" => {
                f.only(&["n", "k", "rho"])?;
                Ok(Self::Model {
                    n: f.require("n")?,
                    k: f.require("k")?,
                    rho: f.get("rho")?,
                })
            }
            "quadratic" => {
                f.only(&["c", "radius"])?;
                Ok(Self::Quadratic {
                    c: f.get("c")?.unwrap_or(1.0),
                    radius: f.get("radius")?.unwrap_or(1.0),
                })
            }
            "harmonic-cubic" => {
                f.only(&["radius"])?;
                Ok(Self::HarmonicCubic {
                    radius: f.get("radius")?.unwrap_or(1.0),
                })
            }
            "jet" => {
                f.only(&["n", "k", "order", "rho"])?;
                Ok(Self::Jet {
                    n: f.require("n")?,
                    k: f.require("k")?,
                    order: f.get("order")?.unwrap_or(8),
                    rho: f.get("rho")?.unwrap_or(DEFAULT_RADIUS),
                })
            }
            other => Err(CliError::usage(format!(
                "unknown potential kind '{other}' (expected model, quadratic, harmonic-cubic or jet)"
            ))),
        }
    }
}

impl PotentialSpec {
    /// Fills in defaults that depend on the family index.
    pub fn resolve(self) -> Result<Self, CliError> {
        Ok(match self {
            Self::Model { n, k, rho } => {
                let idx = FamilyIndex::new(n, k)?;
                Self::Model {
                    n,
                    k,
                    rho: Some(rho.unwrap_or_else(|| default_radius(idx))),
                }
            }
            other => other,
        })
    }

    /// Dimension fixed by the potential itself, if any.
    pub fn intrinsic_dim(&self) -> Option<usize> {
        match self {
            Self::Model { n, .. } | Self::Jet { n, .. } => Some(*n),
            Self::HarmonicCubic { .. } => Some(2),
            Self::Quadratic { .. } => None,
        }
    }

    pub fn dim(&self, flag: Option<usize>) -> Result<usize, CliError> {
        match (self.intrinsic_dim(), flag) {
            (Some(a), Some(b)) if a != b => Err(CliError::usage(format!("--dim {b} conflicts with the potential's dimension {a}"))),
            (Some(a), _) => Ok(a),
            (None, Some(b)) if b >= 1 => Ok(b),
            (None, Some(_)) => Err(CliError::usage("--dim must be at least 1")),
            (None, None) => Ok(2),
        }
    }

    pub fn family(&self) -> Option<FamilyIndex> {
        match self {
            Self::Model { n, k, .. } | Self::Jet { n, k, .. } => FamilyIndex::new(*n, *k).ok(),
            _ => None,
        }
    }

    /// The model as an axisymmetric polynomial; `None` for other kinds.
    pub fn model_field(&self) -> Result<Option<AxisymPolynomial>, CliError> {
        match self {
            Self::Model { n, k, rho } => {
                let idx = FamilyIndex::new(*n, *k)?;
                let rho = rho.unwrap_or_else(|| default_radius(idx));
                Ok(Some(model_potential(idx, rho)?.into_field()))
            }
            _ => Ok(None),
        }
    }

    pub fn build(&self, dim: usize) -> Result<Arc<dyn PotentialField>, CliError> {
        Ok(match self {
            Self::Model { .. } => Arc::new(self.model_field()?.expect("model spec")),
            Self::Quadratic { c, radius } => {
                check_radius(*radius)?;
                Arc::new(Quadratic::isotropic(dim, *c, *radius))
            }
            Self::HarmonicCubic { radius } => {
                check_radius(*radius)?;
                Arc::new(HarmonicCubic::new(*radius))
            }
            Self::Jet { n, k, order, rho } => {
                check_radius(*rho)?;
                let idx = FamilyIndex::new(*n, *k)?;
                Arc::new(cauchy_jet_solve(idx, *order)?.potential(*rho)?)
            }
        })
    }
}

fn check_radius(r: f64) -> Result<(), CliError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(CliError::usage(format!("radius {r} must be positive")))
    }
}
