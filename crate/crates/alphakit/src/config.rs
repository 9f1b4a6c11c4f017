//! Run configuration shared by the `solve`, `series` and `verify` commands.

use std::path::PathBuf;
use std::str::FromStr;

use alphakit_core::solver::QuadratureConfig;
use alphakit_core::{Alpha, Grid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_R_MAX: f64 = 0.95;
pub const MIN_ORDER: usize = 8;

/// Shape of the evaluation grid; the radius comes from [`RunConfig::r_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    /// `polar:NRxNA`
    Polar { radial: usize, angular: usize },
    /// `cartesian:STEP`
    Cartesian { step: f64 },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Polar { radial: 10, angular: 32 }
    }
}

impl FromStr for GridSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Invalid(format!("grid spec {s:?} must be polar:NRxNA or cartesian:STEP"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "polar" => {
                let (r, a) = rest.split_once('x').ok_or_else(bad)?;
                let radial = r.parse().map_err(|_| bad())?;
                let angular = a.parse().map_err(|_| bad())?;
                if radial == 0 || angular == 0 {
                    return Err(bad());
                }
                Ok(GridSpec::Polar { radial, angular })
            }
            "cartesian" => {
                let step: f64 = rest.parse().map_err(|_| bad())?;
                if !(step > 0.0 && step.is_finite()) {
                    return Err(bad());
                }
                Ok(GridSpec::Cartesian { step })
            }
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridSpec::Polar { radial, angular } => write!(f, "polar:{radial}x{angular}"),
            GridSpec::Cartesian { step } => write!(f, "cartesian:{step}"),
        }
    }
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything a run needs besides its mathematical inputs. Read from a JSON
/// file; command-line flags override individual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub circle_nodes: usize,
    pub radial_order: usize,
    pub angular_order: usize,
    pub grid: GridSpec,
    pub r_max: f64,
    /// Command-specific acceptance tolerance; each command has its own default.
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        RunConfig {
            alpha: 0.0,
            circle_nodes: q.circle_nodes,
            radial_order: q.radial_order,
            angular_order: q.angular_order,
            grid: GridSpec::default(),
            r_max: DEFAULT_R_MAX,
            tolerance: None,
            out: None,
            summary: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        Alpha::new(self.alpha)?;
        for (name, n) in
            [("circle_nodes", self.circle_nodes), ("radial_order", self.radial_order), ("angular_order", self.angular_order)]
        {
            if n < MIN_ORDER {
                return Err(CliError::Invalid(format!("{name} must be at least {MIN_ORDER}, got {n}")));
            }
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(CliError::Invalid(format!("r_max must lie in (0, 1), got {}", self.r_max)));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Invalid(format!("tolerance must be positive, got {t}")));
            }
        }
        self.to_grid()?;
        Ok(())
    }

    pub fn alpha(&self) -> Result<Alpha> {
        Ok(Alpha::new(self.alpha)?)
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            circle_nodes: self.circle_nodes,
            radial_order: self.radial_order,
            angular_order: self.angular_order,
        }
    }

    pub fn to_grid(&self) -> Result<Grid> {
        let g = match self.grid {
            GridSpec::Polar { radial, angular } => Grid::Polar { radial, angular, r_max: self.r_max },
            GridSpec::Cartesian { step } => Grid::Cartesian { step, r_max: self.r_max },
        };
        g.validate()?;
        Ok(g)
    }

    pub fn tolerance_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}
