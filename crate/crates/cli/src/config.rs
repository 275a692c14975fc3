//! TOML run configuration.
//!
//! Lengths are Euclidean, times are in process time (the clock of the
//! process generated by ½Δ_k). Parsing then serializing a valid config
//! yields a fixed point after one round.

use std::path::Path;

use dunkl_core::domain::{Domain, Shape};
use dunkl_core::process::SimConfig;
use dunkl_core::rootsys::{Family, RootSystem};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub roots: RootsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Shape>,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occupation: Option<OccupationTask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeTask>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// `family` is one of `z2`, `a`, `b`, `dihedralM` or `custom`. Custom
/// systems list their positive roots (rescaled to `|α|² = 2`) and take one
/// multiplicity per root; the others take one per orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub multiplicities: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<f64>>>,
}

/// Built-in boundary data. Coordinate indices are 1-based, like the CSV
/// column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundarySpec {
    Const { value: f64 },
    Coord { index: usize },
    Product { i: usize, j: usize },
    GLambda,
    /// CSV `x1..xd,value`; evaluated by nearest sample, so only approximate.
    Table { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveTask {
    pub points: Vec<Vec<f64>>,
    pub boundary: BoundarySpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateTask {
    pub x0: Vec<f64>,
    pub t_end: f64,
}

/// Occupation of `B(0, r)` from `x`; paths are followed out to radius
/// `escape·r` between renewal returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupationTask {
    pub r: f64,
    pub x: Vec<f64>,
    #[serde(default = "default_escape")]
    pub escape: f64,
}

fn default_escape() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeTask {
    pub z: Vec<f64>,
    pub t_list: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// Step-by-step CSV of the first `trace_paths` paths of a `solve` run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default = "default_trace_paths")]
    pub trace_paths: u64,
}

fn default_trace_paths() -> u64 {
    1
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("config does not serialize: {e}")))
    }

    /// Builds the root system; λ ≤ 0 and non-invariant multiplicities are
    /// precondition failures.
    pub fn root_system(&self) -> CliResult<RootSystem> {
        let family: Family = self.roots.family.parse()?;
        let sys = match family {
            Family::Custom => {
                let roots = self
                    .roots
                    .roots
                    .as_ref()
                    .ok_or_else(|| CliError::Config("custom family needs `roots`".into()))?;
                RootSystem::custom(roots, &self.roots.multiplicities, false)?
            }
            _ => {
                if self.roots.roots.is_some() {
                    return Err(CliError::Config("`roots` is only allowed with family = \"custom\"".into()));
                }
                let dim = match family {
                    Family::Dihedral(_) => self.roots.dim.unwrap_or(2),
                    _ => self
                        .roots
                        .dim
                        .ok_or_else(|| CliError::Config(format!("family {family} needs `dim`")))?,
                };
                RootSystem::new(family, dim, &self.roots.multiplicities)?
            }
        };
        Ok(sys)
    }

    pub fn domain(&self, dim: usize) -> CliResult<Domain> {
        let shape = self
            .domain
            .clone()
            .ok_or_else(|| CliError::Config("this task needs a [domain] section".into()))?;
        let shape_dim = match &shape {
            Shape::Ball { center, .. } => Some(center.len()),
            Shape::AxisBox { lo, .. } => Some(lo.len()),
            Shape::Annulus { .. } => None,
        };
        if shape_dim.is_some_and(|d| d != dim) {
            return Err(CliError::Config(format!(
                "domain has dimension {} but the root system has dimension {dim}",
                shape_dim.unwrap_or(0)
            )));
        }
        Ok(Domain::from_shape(shape)?)
    }
}

pub fn check_point(name: &str, p: &[f64], dim: usize) -> CliResult<()> {
    if p.len() != dim {
        return Err(CliError::Config(format!("{name} {p:?} has dimension {}, expected {dim}", p.len())));
    }
    if p.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config(format!("{name} {p:?} is not finite")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[roots]
family = "z2"
dim = 2
multiplicities = [0.5, 0.5]

[domain]
kind = "ball"
center = [0.0, 0.0]
radius = 1.0

[sim]
dt_base = 1e-3
paths = 500
seed = 3

[solve]
points = [[0.3, 0.2], [-0.1, 0.4]]
boundary = { kind = "coord", index = 1 }

[output]
format = "csv"
"#;

    #[test]
    fn round_trip_is_stable() {
        let a = RunConfig::parse(SAMPLE).unwrap();
        let s1 = a.to_toml().unwrap();
        let b = RunConfig::parse(&s1).unwrap();
        assert_eq!(a, b);
        assert_eq!(s1, b.to_toml().unwrap());
        assert_eq!(a.sim.dt_floor, SimConfig::default().dt_floor);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = SAMPLE.replace("radius = 1.0", "radius = 1.0\nradios = 2.0");
        assert!(matches!(RunConfig::parse(&bad), Err(CliError::Config(_))));
    }

    #[test]
    fn lambda_failure_is_a_precondition() {
        let cfg = RunConfig::parse("[roots]\nfamily = \"z2\"\ndim = 1\nmultiplicities = [0.3]\n").unwrap();
        let err = cfg.root_system().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains('λ'));
    }

    #[test]
    fn domain_dimension_is_checked() {
        let cfg = RunConfig::parse(&SAMPLE.replace("center = [0.0, 0.0]", "center = [0.0]")).unwrap();
        assert!(matches!(cfg.domain(2), Err(CliError::Config(_))));
    }
}
