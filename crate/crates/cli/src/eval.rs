//! Pattern sets and pure inference on stored genomes.

use lpsnn_core::datasets::{bundled_iris, make_fold_plan, FoldPlan, IrisClass, IrisSample};
use lpsnn_core::encoders::{
    decode_first_spike, encode_iris_sample, iris_class_targets, xor_patterns,
};
use lpsnn_core::ga::evaluate_mse;
use lpsnn_core::{Error, FitnessTask, Genome, Pattern, SpikeTrain, Target};

use crate::config::{Experiment, TaskKind};
use crate::error::{HarnessError, Result};

/// Which half of a fold to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Train,
    Validation,
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "train" => Ok(Role::Train),
            "val" | "validation" => Ok(Role::Validation),
            _ => Err(format!("unknown role {s:?}; expected train or val")),
        }
    }
}

/// What patterns to present to a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSpec {
    /// The four XOR patterns.
    Xor,
    /// One side of one fold of the iris plan.
    IrisFold { fold: usize, role: Role },
    /// All 150 iris samples.
    IrisAll,
}

impl PatternSpec {
    pub fn default_for(task: TaskKind) -> Self {
        match task {
            TaskKind::Xor => PatternSpec::Xor,
            TaskKind::Iris => PatternSpec::IrisAll,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PatternSet {
    pub names: Vec<String>,
    pub patterns: Vec<Pattern>,
    /// Class labels, for classification tasks.
    pub labels: Option<Vec<IrisClass>>,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

pub fn xor_pattern_set(exp: &Experiment) -> PatternSet {
    let xor = xor_patterns(exp.coding);
    PatternSet {
        names: xor
            .iter()
            .map(|p| format!("{}{}", u8::from(p.bits.0), u8::from(p.bits.1)))
            .collect(),
        patterns: xor.iter().map(|p| p.to_pattern()).collect(),
        labels: None,
    }
}

pub fn iris_pattern_set(
    exp: &Experiment,
    samples: &[IrisSample],
    indices: &[usize],
) -> Result<PatternSet> {
    let targets = iris_class_targets();
    let mut set = PatternSet {
        names: Vec::with_capacity(indices.len()),
        patterns: Vec::with_capacity(indices.len()),
        labels: Some(Vec::with_capacity(indices.len())),
    };
    for &i in indices {
        let s = samples
            .get(i)
            .ok_or_else(|| Error::Dataset(format!("sample index {i} out of range")))?;
        set.names.push(i.to_string());
        set.patterns.push(Pattern {
            inputs: encode_iris_sample(&s.features, &exp.grf, exp.sim.dt)?,
            target: Target::At(
                targets
                    .target_of(s.label)
                    .expect("every class has a target"),
            ),
        });
        set.labels.as_mut().unwrap().push(s.label);
    }
    Ok(set)
}

pub fn fold_plan(exp: &Experiment) -> Result<FoldPlan> {
    Ok(make_fold_plan(
        &bundled_iris(),
        exp.cv.train_size_per_class,
        exp.cv.seed,
    )?)
}

pub fn pattern_set(exp: &Experiment, spec: PatternSpec) -> Result<PatternSet> {
    match (exp.task, spec) {
        (TaskKind::Xor, PatternSpec::Xor) => Ok(xor_pattern_set(exp)),
        (TaskKind::Iris, PatternSpec::IrisAll) => {
            let samples = bundled_iris();
            let all: Vec<usize> = (0..samples.len()).collect();
            iris_pattern_set(exp, &samples, &all)
        }
        (TaskKind::Iris, PatternSpec::IrisFold { fold, role }) => {
            let plan = fold_plan(exp)?;
            let f = plan.folds.get(fold).ok_or_else(|| {
                HarnessError::Usage(format!(
                    "fold {fold} does not exist; the plan has {}",
                    plan.folds.len()
                ))
            })?;
            let indices = match role {
                Role::Train => &f.train,
                Role::Validation => &f.validation,
            };
            iris_pattern_set(exp, &bundled_iris(), indices)
        }
        (task, spec) => Err(HarnessError::Usage(format!(
            "pattern set {spec:?} does not apply to {task:?}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternResult {
    pub name: String,
    pub target: Target,
    pub output: SpikeTrain,
    pub label: Option<IrisClass>,
    pub predicted: Option<IrisClass>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub patterns: Vec<PatternResult>,
    pub mse: f64,
    /// Percentage of patterns classified within the tolerance window.
    pub accuracy: Option<f64>,
}

/// Builds the objective for a genome, checking it against the experiment.
pub fn task_for(genome: &Genome, exp: &Experiment, set: &PatternSet) -> Result<FitnessTask> {
    if genome.topology != exp.topology {
        return Err(Error::Structural(format!(
            "genome topology {} does not match the configured {}",
            genome.topology, exp.topology
        ))
        .into());
    }
    if genome.scheme != exp.scheme {
        return Err(Error::Structural(format!(
            "genome uses {} weights but the configuration says {}",
            genome.scheme, exp.scheme
        ))
        .into());
    }
    Ok(FitnessTask::new(
        genome.topology.clone(),
        genome.scheme,
        exp.sim,
        set.patterns.clone(),
    )?)
}

/// Pure inference: output trains, MSE and (for labelled sets) accuracy.
pub fn eval_genome(genome: &Genome, exp: &Experiment, set: &PatternSet) -> Result<EvalReport> {
    let task = task_for(genome, exp, set)?;
    let mse = evaluate_mse(&genome.chromosome, &task)?;
    let outputs = task.output_trains(&genome.chromosome)?;
    let targets = iris_class_targets();
    let mut correct = 0usize;
    let patterns = outputs
        .into_iter()
        .enumerate()
        .map(|(i, output)| {
            let label = set.labels.as_ref().map(|l| l[i]);
            let predicted = label.and_then(|_| decode_first_spike(output.first(), &targets));
            if label.is_some() && predicted == label {
                correct += 1;
            }
            PatternResult {
                name: set.names[i].clone(),
                target: set.patterns[i].target,
                output,
                label,
                predicted,
            }
        })
        .collect();
    let accuracy = set
        .labels
        .as_ref()
        .map(|l| 100.0 * correct as f64 / l.len() as f64);
    Ok(EvalReport {
        patterns,
        mse,
        accuracy,
    })
}

impl EvalReport {
    /// Human-readable per-pattern listing.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for p in &self.patterns {
            let target = match p.target {
                Target::At(t) => format!("{t}"),
                Target::Silent => "silent".into(),
            };
            let spikes: Vec<String> = p.output.times().iter().map(|t| t.to_string()).collect();
            s.push_str(&format!(
                "{}\ttarget {}\tspikes [{}]",
                p.name,
                target,
                spikes.join(" ")
            ));
            if let Some(label) = p.label {
                let predicted = p.predicted.map_or("-".to_string(), |c| c.to_string());
                s.push_str(&format!("\t{label} -> {predicted}"));
            }
            s.push('\n');
        }
        s.push_str(&format!("mse {}\n", self.mse));
        if let Some(a) = self.accuracy {
            s.push_str(&format!("accuracy {a}%\n"));
        }
        s
    }
}
