//! Experiment configuration files.
//!
//! A config is a TOML document with top-level experiment keys and `[sim]`,
//! `[ga]`, `[grf]` and `[cv]` sections. Every omitted key falls back to the
//! reference settings for the task, so an almost empty file is a valid
//! experiment. The firing threshold is derived from the task, architecture
//! and weight scheme; an explicit `sim.threshold` must agree with that rule.

use std::fs;
use std::path::{Path, PathBuf};

use lpsnn_core::encoders::{GrfParams, XorCoding};
use lpsnn_core::{GaParams, PspShape, SimParams, Topology, WeightScheme};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Xor,
    Iris,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub sim_time_ms: Option<f64>,
    pub dt: Option<f64>,
    pub tau: Option<f64>,
    pub tau_r: Option<f64>,
    pub threshold: Option<f64>,
    pub psp_shape: Option<PspShape>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSection {
    pub population_size: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub selective_pressure: Option<f64>,
    pub elite_count: Option<usize>,
    pub max_generations: Option<usize>,
    pub target_mse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CvSection {
    pub train_size_per_class: usize,
    /// Seed of the per-class shuffle that defines the folds.
    pub seed: u64,
    /// Row label for the results table; defaults to the training-set size.
    pub label: Option<String>,
}

impl Default for CvSection {
    fn default() -> Self {
        CvSection {
            train_size_per_class: 30,
            seed: 0,
            label: None,
        }
    }
}

/// The on-disk configuration, before defaults and validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: TaskKind,
    pub architecture: Option<Vec<usize>>,
    #[serde(default = "default_scheme")]
    pub scheme: WeightScheme,
    pub coding: Option<XorCoding>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub ga: GaSection,
    #[serde(default)]
    pub grf: Option<GrfParams>,
    #[serde(default)]
    pub cv: CvSection,
}

fn default_scheme() -> WeightScheme {
    WeightScheme::Integer
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_workers() -> usize {
    1
}

/// A validated experiment with every default resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub task: TaskKind,
    pub topology: Topology,
    pub scheme: WeightScheme,
    pub coding: XorCoding,
    pub sim: SimParams,
    /// `rng_seed` is overwritten per run.
    pub ga: GaParams,
    pub grf: GrfParams,
    pub cv: CvSection,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    pub workers: usize,
}

/// Firing threshold required for a task/architecture/scheme combination.
///
/// XOR with a hidden layer uses 1.5, XOR without one 3; iris uses 3 for
/// half-step weights and 6 for integer weights.
pub fn required_threshold(task: TaskKind, topology: &Topology, scheme: WeightScheme) -> f64 {
    match (task, scheme) {
        (TaskKind::Xor, _) if topology.layer_sizes().len() == 2 => 3.0,
        (TaskKind::Xor, _) => 1.5,
        (TaskKind::Iris, WeightScheme::HalfStep) => 3.0,
        (TaskKind::Iris, WeightScheme::Integer) => 6.0,
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::ConfigSyntax { message, .. } => HarnessError::ConfigSyntax {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::ConfigSyntax {
            path: "<inline>".into(),
            message: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies defaults and checks every constraint, reporting all problems at once.
    pub fn resolve(&self) -> Result<Experiment, HarnessError> {
        let mut problems = Vec::new();
        let grf = self.grf.unwrap_or_default();

        let default_arch = match self.task {
            TaskKind::Xor => vec![3, 5, 1],
            TaskKind::Iris => vec![4 * grf.m + 1, 8, 1],
        };
        let topology = match Topology::new(self.architecture.clone().unwrap_or(default_arch)) {
            Ok(t) => Some(t),
            Err(e) => {
                problems.push(format!("architecture: {e}"));
                None
            }
        };
        let coding = self.coding.unwrap_or(match &topology {
            Some(t) if t.layer_sizes().len() == 2 => XorCoding::Binary,
            _ => XorCoding::HiddenLayer,
        });

        if let Some(t) = &topology {
            let inputs = match self.task {
                TaskKind::Xor => 3,
                TaskKind::Iris => 4 * grf.m + 1,
            };
            if t.input_size() != inputs {
                problems.push(format!(
                    "architecture {t} has {} inputs; this task encodes {inputs}",
                    t.input_size()
                ));
            }
            if t.output_size() != 1 {
                problems.push(format!(
                    "architecture {t} must end in a single output neuron"
                ));
            }
        }
        if self.task == TaskKind::Iris {
            if self.coding.is_some() {
                problems.push("coding applies to xor experiments only".into());
            }
            if let Err(e) = grf.validate() {
                problems.push(format!("grf: {e}"));
            }
            let size = self.cv.train_size_per_class;
            if size == 0 || size >= 50 {
                problems.push(format!(
                    "cv.train_size_per_class = {size} leaves no validation samples (must be 1..49)"
                ));
            }
        } else if self.grf.is_some() {
            problems.push("grf applies to iris experiments only".into());
        }

        let defaults = SimParams::default();
        let mut sim = SimParams {
            sim_time_ms: self.sim.sim_time_ms.unwrap_or(defaults.sim_time_ms),
            dt: self.sim.dt.unwrap_or(defaults.dt),
            tau: self.sim.tau.unwrap_or(defaults.tau),
            tau_r: self.sim.tau_r.unwrap_or(defaults.tau_r),
            threshold: defaults.threshold,
            psp_shape: self.sim.psp_shape.unwrap_or_default(),
        };
        if let Some(t) = &topology {
            let required = required_threshold(self.task, t, self.scheme);
            match self.sim.threshold {
                Some(th) if th != required => problems.push(format!(
                    "sim.threshold = {th} conflicts with the required {required} for {:?} {t} {}",
                    self.task, self.scheme
                )),
                _ => {}
            }
            sim.threshold = required;
        }
        if let Err(e) = sim.validate() {
            problems.push(format!("sim: {e}"));
        }

        let ga_defaults = match self.task {
            TaskKind::Xor => GaParams::default(),
            TaskKind::Iris => GaParams {
                population_size: 600,
                max_generations: 600,
                target_mse: 0.25,
                ..GaParams::default()
            },
        };
        let ga = GaParams {
            population_size: self
                .ga
                .population_size
                .unwrap_or(ga_defaults.population_size),
            crossover_rate: self.ga.crossover_rate.unwrap_or(ga_defaults.crossover_rate),
            mutation_rate: self.ga.mutation_rate.unwrap_or(ga_defaults.mutation_rate),
            selective_pressure: self
                .ga
                .selective_pressure
                .unwrap_or(ga_defaults.selective_pressure),
            elite_count: self.ga.elite_count.unwrap_or(ga_defaults.elite_count),
            max_generations: self
                .ga
                .max_generations
                .unwrap_or(ga_defaults.max_generations),
            target_mse: self.ga.target_mse.unwrap_or(ga_defaults.target_mse),
            rng_seed: 0,
        };
        if let Err(e) = ga.validate() {
            problems.push(format!("ga: {e}"));
        }

        if self.seeds.is_empty() {
            problems.push("seeds must list at least one seed".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            problems.push("seeds must be distinct".into());
        }
        if self.workers == 0 {
            problems.push("workers must be at least 1".into());
        }

        if !problems.is_empty() {
            return Err(HarnessError::InvalidConfig(problems));
        }
        let topology = topology.expect("checked above");
        let output_dir = self.output_dir.clone().unwrap_or_else(|| {
            PathBuf::from("runs").join(format!(
                "{}-{}-{}",
                match self.task {
                    TaskKind::Xor => "xor",
                    TaskKind::Iris => "iris",
                },
                topology,
                self.scheme
            ))
        });
        Ok(Experiment {
            task: self.task,
            topology,
            scheme: self.scheme,
            coding,
            sim,
            ga,
            grf,
            cv: self.cv.clone(),
            seeds: self.seeds.clone(),
            output_dir,
            workers: self.workers,
        })
    }
}

impl Experiment {
    pub fn ga_for_seed(&self, seed: u64) -> GaParams {
        GaParams {
            rng_seed: seed,
            ..self.ga
        }
    }

    pub fn table_label(&self) -> String {
        self.cv
            .label
            .clone()
            .unwrap_or_else(|| (3 * self.cv.train_size_per_class).to_string())
    }
}
