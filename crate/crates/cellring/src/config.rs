//! Run configuration: TOML config files, CLI overrides, defaults, and
//! validation. A resolved [`RunConfig`] serializes back to TOML as the run's
//! metadata record; feeding that record back as a config file reproduces the
//! run byte-for-byte.

use crate::dynamics::{Convention, ModelParams};
use crate::error::{Error, Result};
use crate::sweep::{AxisSpec, RingSampleSpec, SimSettings};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The eight CLI commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    Complexity,
    Spectrum,
    Stability2,
    RingStability,
    MapComplexity,
    MapStability,
    MapEigs,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Complexity => "complexity",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Stability2 => "stability2",
            CommandKind::RingStability => "ring-stability",
            CommandKind::MapComplexity => "map-complexity",
            CommandKind::MapStability => "map-stability",
            CommandKind::MapEigs => "map-eigs",
        }
    }

    fn is_equilibrium_map(self) -> bool {
        matches!(self, CommandKind::MapStability | CommandKind::MapEigs)
    }
}

/// A field that accepts either one shared value or one value per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarOrVec {
    Scalar(f64),
    PerCell(Vec<f64>),
}

impl ScalarOrVec {
    pub fn expand(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            ScalarOrVec::Scalar(v) => Ok(vec![*v; n]),
            ScalarOrVec::PerCell(vs) => {
                if vs.len() != n {
                    return Err(Error::Config(format!(
                        "expected {n} per-cell values, got {}",
                        vs.len()
                    )));
                }
                Ok(vs.clone())
            }
        }
    }
}

/// Model parameters as configured (scalar coupling/affinity allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub r: f64,
    pub c: ScalarOrVec,
    pub p: ScalarOrVec,
    pub n_cells: usize,
}

impl ModelSection {
    /// Validated model parameters. A scalar affinity `p` on a two-cell model
    /// expands to `(p, 1 - p)`; on larger rings a scalar `p` expands to the
    /// uniform assignment `1/N` only when it equals `1/N`.
    pub fn to_params(&self) -> Result<ModelParams> {
        let n = self.n_cells;
        let coupling = self.c.expand(n)?;
        let affinities = match (&self.p, n) {
            (ScalarOrVec::Scalar(p), 2) => vec![*p, 1.0 - *p],
            (ScalarOrVec::Scalar(p), _) => vec![*p; n],
            (ScalarOrVec::PerCell(ps), _) => {
                if ps.len() != n {
                    return Err(Error::Config(format!(
                        "expected {n} affinities, got {}",
                        ps.len()
                    )));
                }
                ps.clone()
            }
        };
        ModelParams::new(self.r, coupling, affinities)
    }
}

/// Axis pair for the map commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxesSection {
    pub x: AxisSpec,
    pub y: AxisSpec,
}

/// Fully resolved run configuration. Serialized verbatim as the metadata
/// record of every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub output: PathBuf,
    pub seed: u64,
    pub convention: Convention,
    pub full_res: bool,
    pub plot: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Equilibrium point for single-point `stability2` reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eq: Option<Vec<f64>>,
    pub model: ModelSection,
    pub sim: SimSettings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<AxesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSampleSpec>,
}

impl RunConfig {
    /// Validate every section against the model bounds.
    pub fn validate(&self) -> Result<()> {
        let params = self.model.to_params()?;
        if self.sim.n_total <= self.sim.n_transient {
            return Err(Error::Config(format!(
                "sim.n_total = {} must exceed sim.n_transient = {}",
                self.sim.n_total, self.sim.n_transient
            )));
        }
        for (i, &x) in self.sim.x0.iter().enumerate() {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::Config(format!(
                    "sim.x0[{i}] = {x} must lie strictly inside (0, 1)"
                )));
            }
        }
        if let Some(axes) = &self.axes {
            axes.x.validate()?;
            axes.y.validate()?;
        }
        if let Some(eq) = &self.eq {
            if eq.len() != params.n_cells() {
                return Err(Error::Config(format!(
                    "eq has {} components but the model has {} cells",
                    eq.len(),
                    params.n_cells()
                )));
            }
        }
        match self.command {
            CommandKind::Simulate | CommandKind::Complexity | CommandKind::Spectrum => {
                if self.sim.x0.len() != params.n_cells() {
                    return Err(Error::Config(format!(
                        "sim.x0 has {} components but the model has {} cells",
                        self.sim.x0.len(),
                        params.n_cells()
                    )));
                }
            }
            CommandKind::MapComplexity => {
                if self.axes.is_none() {
                    return Err(Error::Config("map-complexity requires axes".into()));
                }
            }
            CommandKind::MapStability | CommandKind::MapEigs => {
                if self.axes.is_none() {
                    return Err(Error::Config(format!(
                        "{} requires axes",
                        self.command.name()
                    )));
                }
                if params.n_cells() != 2 {
                    return Err(Error::Config(format!(
                        "{} is a two-cell analysis (n_cells = 2)",
                        self.command.name()
                    )));
                }
            }
            CommandKind::Stability2 => {
                if params.n_cells() != 2 {
                    return Err(Error::Config(
                        "stability2 is a two-cell analysis (n_cells = 2)".into(),
                    ));
                }
                if self.eq.is_none() && self.axes.is_none() {
                    return Err(Error::Config(
                        "stability2 needs either eq = [x, y] or a grid (axes / --grid-step)"
                            .into(),
                    ));
                }
            }
            CommandKind::RingStability => {}
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("serialize config: {e}")))
    }
}

/// Unresolved configuration: every field optional. This is the schema of
/// config files; CLI flags share the same shape.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<CommandKind>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub convention: Option<Convention>,
    pub full_res: Option<bool>,
    pub plot: Option<bool>,
    pub workers: Option<usize>,
    pub eq: Option<Vec<f64>>,
    pub model: Option<PartialModel>,
    pub sim: Option<PartialSim>,
    pub axes: Option<AxesSection>,
    pub ring: Option<RingSampleSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialModel {
    pub r: Option<f64>,
    pub c: Option<ScalarOrVec>,
    pub p: Option<ScalarOrVec>,
    pub n_cells: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSim {
    pub x0: Option<Vec<f64>>,
    pub n_total: Option<usize>,
    pub n_transient: Option<usize>,
}

impl PartialConfig {
    /// Parse a TOML config file; unknown keys are rejected with the offending
    /// key named in the diagnostic.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text)
    }

    /// Layer `other` on top of `self` (field-by-field; `other` wins).
    pub fn overlaid(self, other: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: other.command.or(self.command),
            output: other.output.or(self.output),
            seed: other.seed.or(self.seed),
            convention: other.convention.or(self.convention),
            full_res: other.full_res.or(self.full_res),
            plot: other.plot.or(self.plot),
            workers: other.workers.or(self.workers),
            eq: other.eq.or(self.eq),
            model: match (self.model, other.model) {
                (Some(a), Some(b)) => Some(PartialModel {
                    r: b.r.or(a.r),
                    c: b.c.or(a.c),
                    p: b.p.or(a.p),
                    n_cells: b.n_cells.or(a.n_cells),
                }),
                (a, b) => b.or(a),
            },
            sim: match (self.sim, other.sim) {
                (Some(a), Some(b)) => Some(PartialSim {
                    x0: b.x0.or(a.x0),
                    n_total: b.n_total.or(a.n_total),
                    n_transient: b.n_transient.or(a.n_transient),
                }),
                (a, b) => b.or(a),
            },
            axes: other.axes.or(self.axes),
            ring: other.ring.or(self.ring),
        }
    }

    /// Resolve against the per-command defaults and validate.
    ///
    /// Defaults: model r=3.8, c=0.02, p=0.5 on two cells; x0=(0.3, 0.5) with
    /// 5000 iterations discarding 1000. Map commands default to desk-scale
    /// grids (step 0.02 over (r, p), 3000-step series) unless `full_res` is
    /// set, which restores the 0.005 step and 5000-step series.
    pub fn resolve(self, command: CommandKind) -> Result<RunConfig> {
        if let Some(file_cmd) = self.command {
            if file_cmd != command {
                return Err(Error::Config(format!(
                    "config file is for `{}` but the command line says `{}`",
                    file_cmd.name(),
                    command.name()
                )));
            }
        }
        let full_res = self.full_res.unwrap_or(false);
        let model_defaults = PartialModel::default();
        let model = self.model.unwrap_or(model_defaults);
        let n_cells = model.n_cells.unwrap_or(2);
        let model = ModelSection {
            r: model.r.unwrap_or(3.8),
            c: model.c.unwrap_or(ScalarOrVec::Scalar(0.02)),
            p: model.p.unwrap_or(ScalarOrVec::Scalar(0.5)),
            n_cells,
        };

        let sim_default = if command == CommandKind::MapComplexity && !full_res {
            SimSettings::reduced()
        } else {
            SimSettings::full_resolution()
        };
        let sim = match self.sim {
            None => sim_default,
            Some(s) => SimSettings {
                x0: s.x0.unwrap_or(sim_default.x0),
                n_total: s.n_total.unwrap_or(sim_default.n_total),
                n_transient: s.n_transient.unwrap_or(sim_default.n_transient),
            },
        };

        let axes = match (self.axes, command) {
            (Some(a), _) => Some(a),
            (None, CommandKind::MapComplexity) => {
                let step = if full_res { 0.005 } else { 0.02 };
                Some(AxesSection {
                    x: AxisSpec::new("r", 3.6, 4.0, step)?,
                    y: AxisSpec::new("p", 0.0, 1.0, step)?,
                })
            }
            (None, cmd) if cmd.is_equilibrium_map() => {
                let step = if full_res { 0.005 } else { 0.01 };
                Some(AxesSection {
                    x: AxisSpec::new("x", 0.1, 0.9, step)?,
                    y: AxisSpec::new("y", 0.1, 0.9, step)?,
                })
            }
            (None, CommandKind::Stability2) if self.eq.is_none() => {
                // grid mode implied when no single point is requested
                Some(AxesSection {
                    x: AxisSpec::new("x", 0.1, 0.9, 0.01)?,
                    y: AxisSpec::new("y", 0.1, 0.9, 0.01)?,
                })
            }
            (None, _) => None,
        };

        let ring = if command == CommandKind::RingStability {
            Some(self.ring.unwrap_or_default())
        } else {
            self.ring
        };

        let default_convention = match command {
            CommandKind::RingStability => Convention::Ring,
            _ => Convention::TwoCell,
        };

        let config = RunConfig {
            command,
            output: self.output.unwrap_or_else(|| PathBuf::from("out")),
            seed: self.seed.unwrap_or(0),
            convention: self.convention.unwrap_or(default_convention),
            full_res,
            plot: self.plot.unwrap_or(false),
            workers: self.workers,
            eq: self.eq,
            model,
            sim,
            axes,
            ring,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gets_full_resolution_defaults() {
        let cfg = PartialConfig::default()
            .resolve(CommandKind::Complexity)
            .unwrap();
        assert_eq!(cfg.sim.x0, vec![0.3, 0.5]);
        assert_eq!(cfg.sim.n_total, 5000);
        assert_eq!(cfg.sim.n_transient, 1000);
        assert_eq!(cfg.model.r, 3.8);
        assert_eq!(cfg.convention, Convention::TwoCell);
    }

    #[test]
    fn map_defaults_reduced_vs_full_res() {
        let cfg = PartialConfig::default()
            .resolve(CommandKind::MapComplexity)
            .unwrap();
        let axes = cfg.axes.unwrap();
        assert_eq!(axes.x.step, 0.02);
        assert_eq!(cfg.sim.n_total - cfg.sim.n_transient, 2000);

        let cfg = PartialConfig {
            full_res: Some(true),
            ..Default::default()
        }
        .resolve(CommandKind::MapComplexity)
        .unwrap();
        let axes = cfg.axes.unwrap();
        assert_eq!(axes.x.step, 0.005);
        assert_eq!(axes.x.len(), 81);
        assert_eq!(axes.y.len(), 201);
        assert_eq!(cfg.sim.n_total - cfg.sim.n_transient, 4000);
    }

    #[test]
    fn out_of_range_r_rejected_with_bound_named() {
        let partial = PartialConfig {
            model: Some(PartialModel {
                r: Some(5.0),
                ..Default::default()
            }),
            ..Default::default()
        };
        let err = partial.resolve(CommandKind::Complexity).unwrap_err();
        assert!(err.to_string().contains("0 < r <= 4"), "{err}");
    }

    #[test]
    fn bad_affinity_sum_rejected() {
        let partial = PartialConfig {
            model: Some(PartialModel {
                p: Some(ScalarOrVec::PerCell(vec![0.5, 0.6])),
                ..Default::default()
            }),
            ..Default::default()
        };
        let err = partial.resolve(CommandKind::Complexity).unwrap_err();
        assert!(err.to_string().contains("= 1"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = PartialConfig::from_toml("definitely_not_a_key = 1").unwrap_err();
        assert!(err.to_string().contains("definitely_not_a_key"), "{err}");
    }

    #[test]
    fn resolved_config_round_trips_through_toml() {
        let cfg = PartialConfig::default()
            .resolve(CommandKind::MapComplexity)
            .unwrap();
        let text = cfg.to_toml().unwrap();
        let reparsed = PartialConfig::from_toml(&text).unwrap();
        let cfg2 = reparsed.resolve(CommandKind::MapComplexity).unwrap();
        assert_eq!(cfg, cfg2);
        assert_eq!(text, cfg2.to_toml().unwrap());
    }

    #[test]
    fn command_mismatch_is_an_error() {
        let file = PartialConfig {
            command: Some(CommandKind::Simulate),
            ..Default::default()
        };
        assert!(file.resolve(CommandKind::Complexity).is_err());
    }

    #[test]
    fn cli_overlay_wins_over_file() {
        let file = PartialConfig {
            seed: Some(1),
            model: Some(PartialModel {
                r: Some(3.5),
                ..Default::default()
            }),
            ..Default::default()
        };
        let cli = PartialConfig {
            seed: Some(2),
            ..Default::default()
        };
        let merged = file.overlaid(cli);
        let cfg = merged.resolve(CommandKind::Complexity).unwrap();
        assert_eq!(cfg.seed, 2);
        assert_eq!(cfg.model.r, 3.5);
    }
}
