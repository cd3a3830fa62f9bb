//! Experiment configuration and run manifest.
//!
//! One JSON file describes one run; every run's output directory receives
//! the resolved config plus a manifest, so any result can be regenerated
//! from its own folder.

use rotor_core::pulse::PulseEnvelope;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    Quantum2d,
    Classical2d,
    Classical3d,
    Quantum3d,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EngineKind::Quantum2d => "quantum2d",
            EngineKind::Classical2d => "classical2d",
            EngineKind::Classical3d => "classical3d",
            EngineKind::Quantum3d => "quantum3d",
        };
        f.write_str(s)
    }
}

/// What a run computes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Scenario {
    /// One kick of the given strength; angular density snapshots at the
    /// listed times after the kick.
    SingleKick { strength: f64, taus: Vec<f64> },
    /// Accumulative squeezing: kick at every factor minimum.
    Accumulate {
        strength: f64,
        kicks: usize,
        /// Shift every delay by one revival period (quantum only).
        #[serde(default)]
        revival_shift: bool,
    },
    /// Fixed-budget delay optimization (classical 2D objective).
    Optimize {
        kicks: usize,
        strength: f64,
        restarts: usize,
        max_iters: usize,
    },
    /// Linearized focusing-time prediction for a pulse envelope.
    Focal {
        pulse: PulseEnvelope,
        tau0: f64,
        tau_end: f64,
        tolerance: f64,
    },
    /// A built-in demonstration scenario from the catalog.
    Figure { id: String },
}

fn default_particles() -> usize {
    100_000
}

fn default_grid_points() -> usize {
    512
}

/// Fully resolved run description; serializes bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub engine: EngineKind,
    pub scenario: Scenario,
    #[serde(default = "default_particles")]
    pub particles: usize,
    #[serde(default)]
    pub sigma_omega: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    pub output_dir: PathBuf,
}

#[derive(Debug)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error in `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        message: message.into(),
    }
}

impl ExperimentConfig {
    /// Field-level validation; nothing is written before this passes.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.particles == 0 {
            return Err(err("particles", "must be at least 1"));
        }
        if self.grid_points < 2 {
            return Err(err("grid_points", "must be at least 2"));
        }
        if self.sigma_omega < 0.0 || !self.sigma_omega.is_finite() {
            return Err(err("sigma_omega", "must be finite and nonnegative"));
        }
        match &self.scenario {
            Scenario::SingleKick { strength, taus } => {
                if !strength.is_finite() {
                    return Err(err("scenario.strength", "must be finite"));
                }
                if taus.is_empty() {
                    return Err(err("scenario.taus", "need at least one snapshot time"));
                }
                if taus.iter().any(|t| *t < 0.0 || !t.is_finite()) {
                    return Err(err("scenario.taus", "snapshot times must be nonnegative"));
                }
                if matches!(self.engine, EngineKind::Quantum3d) {
                    return Err(err(
                        "engine",
                        "single_kick drives the 2D/3D kick engines; use a focal or figure \
                         scenario for quantum3d",
                    ));
                }
            }
            Scenario::Accumulate {
                strength,
                kicks,
                revival_shift,
            } => {
                if *kicks == 0 {
                    return Err(err("scenario.kicks", "must be at least 1"));
                }
                if *strength == 0.0 || !strength.is_finite() {
                    return Err(err("scenario.strength", "must be finite and nonzero"));
                }
                match self.engine {
                    EngineKind::Quantum2d => {}
                    EngineKind::Classical2d => {
                        if *revival_shift {
                            return Err(err(
                                "scenario.revival_shift",
                                "classical ensembles have no revivals",
                            ));
                        }
                    }
                    other => {
                        return Err(err(
                            "engine",
                            format!("accumulate supports quantum2d and classical2d, not {other}"),
                        ));
                    }
                }
            }
            Scenario::Optimize {
                kicks,
                strength,
                restarts,
                max_iters,
            } => {
                if !(1..=16).contains(kicks) {
                    return Err(err("scenario.kicks", "supported kick counts are 1..=16"));
                }
                if *strength == 0.0 || !strength.is_finite() {
                    return Err(err("scenario.strength", "must be finite and nonzero"));
                }
                if *restarts == 0 || *max_iters == 0 {
                    return Err(err("scenario.restarts", "restarts and max_iters must be positive"));
                }
                if self.engine != EngineKind::Classical2d {
                    return Err(err(
                        "engine",
                        "optimize evaluates the classical 2D localization factor",
                    ));
                }
            }
            Scenario::Focal {
                pulse,
                tau0,
                tau_end,
                tolerance,
            } => {
                if tau_end <= tau0 {
                    return Err(err("scenario.tau_end", "window must have positive length"));
                }
                if *tolerance <= 0.0 {
                    return Err(err("scenario.tolerance", "must be positive"));
                }
                if let PulseEnvelope::Gaussian { width, .. } = pulse {
                    if *width <= 0.0 {
                        return Err(err("scenario.pulse", "gaussian width must be positive"));
                    }
                }
            }
            Scenario::Figure { id } => {
                let entry = crate::scenarios::catalog()
                    .into_iter()
                    .find(|e| e.id == format!("figure:{id}"))
                    .ok_or_else(|| err("scenario.id", format!("unknown figure id `{id}`")))?;
                if entry.engine != self.engine {
                    return Err(err(
                        "engine",
                        format!("figure:{id} runs on {}, not {}", entry.engine, self.engine),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Canonical serialized form used for hashing and for the copy stored
    /// next to the outputs.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Record of one completed run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub config_hash: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            engine: EngineKind::Quantum2d,
            scenario: Scenario::SingleKick {
                strength: 85.0,
                taus: vec![1.0 / 85.0],
            },
            particles: 1000,
            sigma_omega: 0.0,
            seed: 7,
            grid_points: 1024,
            output_dir: PathBuf::from("out"),
        }
    }

    #[test]
    fn config_round_trips_bit_exactly() {
        let c = sample();
        let json = c.canonical_json();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.canonical_json(), json);
    }

    #[test]
    fn incompatible_pairs_are_rejected() {
        let mut c = sample();
        c.engine = EngineKind::Classical3d;
        c.scenario = Scenario::Accumulate {
            strength: 1.0,
            kicks: 3,
            revival_shift: false,
        };
        assert!(c.validate().is_err());

        let mut shift = sample();
        shift.engine = EngineKind::Classical2d;
        shift.scenario = Scenario::Accumulate {
            strength: 1.0,
            kicks: 3,
            revival_shift: true,
        };
        assert!(shift.validate().is_err());
    }
}
