//! XOR and iris experiment drivers.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use lpsnn_core::datasets::{bundled_iris, mean_validation_error};
use lpsnn_core::ga::{train, write_log_csv};
use lpsnn_core::{FitnessTask, Genome, TrainReport};
use rayon::prelude::*;

use crate::config::{Experiment, ExperimentConfig, TaskKind};
use crate::error::{HarnessError, Result};
use crate::eval::{eval_genome, fold_plan, iris_pattern_set, xor_pattern_set, PatternSet};
use crate::reference::{iris_reference, xor_reference_mse};
use crate::report::{
    best_and_median, median_generations, IrisSummary, ResultsReport, RunRecord, SeedAccuracy,
    Summary, XorSummary, CONFIG_FILE, FOLDS_FILE,
};

/// GA seed of one fold of an iris seed; fold 0 uses the seed itself.
pub fn fold_seed(seed: u64, fold: usize) -> u64 {
    seed ^ ((fold as u64) << 32)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsReport> {
    match cfg.task {
        TaskKind::Xor => run_xor(cfg),
        TaskKind::Iris => run_iris(cfg),
    }
}

fn prepare(cfg: &ExperimentConfig, task: TaskKind) -> Result<Experiment> {
    if cfg.task != task {
        return Err(HarnessError::Usage(format!(
            "this command runs {task:?} experiments but the configuration is for {:?}",
            cfg.task
        )));
    }
    let exp = cfg.resolve()?;
    let dir = &exp.output_dir;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let path = dir.join(CONFIG_FILE);
    fs::write(&path, cfg.to_toml()).map_err(|e| HarnessError::io(&path, e))?;
    Ok(exp)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {workers} workers: {e}")))
}

/// Trains one network and stores `genome.txt` and `train_log.csv` under `rel`.
fn train_and_store(
    exp: &Experiment,
    set: &PatternSet,
    ga_seed: u64,
    rel: &Path,
) -> Result<(TrainReport, Genome)> {
    let dir = exp.output_dir.join(rel);
    fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
    let task = FitnessTask::new(
        exp.topology.clone(),
        exp.scheme,
        exp.sim,
        set.patterns.clone(),
    )?;
    let report = train(&exp.ga_for_seed(ga_seed), &task)?;
    let genome = Genome::new(
        exp.scheme,
        exp.topology.clone(),
        report.best.chromosome.clone(),
    )?;
    let genome_path = dir.join("genome.txt");
    genome
        .write(&genome_path)
        .map_err(|e| HarnessError::io(&genome_path, e))?;
    let log_path = dir.join("train_log.csv");
    let file = File::create(&log_path).map_err(|e| HarnessError::io(&log_path, e))?;
    write_log_csv(&report.log, BufWriter::new(file)).map_err(|e| HarnessError::io(&log_path, e))?;
    Ok((report, genome))
}

fn rel_str(p: &Path) -> String {
    p.to_string_lossy().replace('\\', "/")
}

pub fn run_xor(cfg: &ExperimentConfig) -> Result<ResultsReport> {
    let exp = prepare(cfg, TaskKind::Xor)?;
    let set = xor_pattern_set(&exp);
    log::info!(
        "xor {} {} dt={} theta={}: {} seeds",
        exp.topology,
        exp.scheme,
        exp.sim.dt,
        exp.sim.threshold,
        exp.seeds.len()
    );
    let runs = pool(exp.workers)?.install(|| {
        exp.seeds
            .par_iter()
            .map(|&seed| {
                let rel = PathBuf::from(format!("seed-{seed}"));
                let (report, _) = train_and_store(&exp, &set, seed, &rel)?;
                log::info!(
                    "seed {seed}: best mse {} after {} generations{}",
                    report.best_mse(),
                    report.generations_run,
                    if report.converged { " (converged)" } else { "" }
                );
                Ok(RunRecord {
                    seed,
                    fold: None,
                    best_mse: report.best_mse(),
                    generations_run: report.generations_run,
                    converged: report.converged,
                    validation_accuracy: None,
                    genome: rel_str(&rel.join("genome.txt")),
                    log: rel_str(&rel.join("train_log.csv")),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = Summary::Xor(xor_summary(&exp, &runs));
    let report = ResultsReport { runs, summary };
    report.write_csvs(&exp.output_dir)?;
    Ok(report)
}

pub fn xor_summary(exp: &Experiment, runs: &[RunRecord]) -> XorSummary {
    let mses: Vec<f64> = runs.iter().map(|r| r.best_mse).collect();
    let (best, median) = best_and_median(&mses, true);
    let gens: Vec<Option<usize>> = runs
        .iter()
        .map(|r| r.converged.then_some(r.generations_run))
        .collect();
    let architecture = exp.topology.to_string();
    XorSummary {
        reference_mse: xor_reference_mse(&architecture, exp.scheme, exp.sim.dt),
        architecture,
        scheme: exp.scheme,
        dt: exp.sim.dt,
        threshold: exp.sim.threshold,
        seeds: runs.len(),
        best_mse: mses[best],
        best_seed: runs[best].seed,
        median_mse: mses[median],
        median_seed: runs[median].seed,
        converged_seeds: runs.iter().filter(|r| r.converged).count(),
        median_generations: median_generations(&gens),
    }
}

pub fn run_iris(cfg: &ExperimentConfig) -> Result<ResultsReport> {
    let exp = prepare(cfg, TaskKind::Iris)?;
    let samples = bundled_iris();
    let plan = fold_plan(&exp)?;
    let folds_path = exp.output_dir.join(FOLDS_FILE);
    let file = File::create(&folds_path).map_err(|e| HarnessError::io(&folds_path, e))?;
    plan.write_csv(BufWriter::new(file))
        .map_err(|e| HarnessError::io(&folds_path, e))?;

    let sets = plan
        .folds
        .iter()
        .map(|f| {
            Ok((
                iris_pattern_set(&exp, &samples, &f.train)?,
                iris_pattern_set(&exp, &samples, &f.validation)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    log::info!(
        "iris {} {} theta={}: {} training samples, {} folds x {} seeds",
        exp.topology,
        exp.scheme,
        exp.sim.threshold,
        3 * exp.cv.train_size_per_class,
        sets.len(),
        exp.seeds.len()
    );

    let jobs: Vec<(u64, usize)> = exp
        .seeds
        .iter()
        .flat_map(|&s| (0..sets.len()).map(move |k| (s, k)))
        .collect();
    let runs = pool(exp.workers)?.install(|| {
        jobs.par_iter()
            .map(|&(seed, fold)| {
                let rel = PathBuf::from(format!("seed-{seed}")).join(format!("fold-{fold}"));
                let (train_set, val_set) = &sets[fold];
                let (report, genome) = train_and_store(&exp, train_set, fold_seed(seed, fold), &rel)?;
                let accuracy = eval_genome(&genome, &exp, val_set)?
                    .accuracy
                    .expect("iris patterns are labelled");
                log::info!(
                    "seed {seed} fold {fold}: train mse {} after {} generations, validation accuracy {accuracy}%",
                    report.best_mse(),
                    report.generations_run
                );
                Ok(RunRecord {
                    seed,
                    fold: Some(fold),
                    best_mse: report.best_mse(),
                    generations_run: report.generations_run,
                    converged: report.converged,
                    validation_accuracy: Some(accuracy),
                    genome: rel_str(&rel.join("genome.txt")),
                    log: rel_str(&rel.join("train_log.csv")),
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = Summary::Iris(iris_summary(&exp, sets.len(), &runs)?);
    let report = ResultsReport { runs, summary };
    report.write_csvs(&exp.output_dir)?;
    Ok(report)
}

/// Cross-validated accuracy of a seed: 100 minus the mean per-fold error.
pub fn seed_accuracy(seed: u64, fold_accuracies: &[f64]) -> Result<SeedAccuracy> {
    let errors: Vec<f64> = fold_accuracies.iter().map(|a| 100.0 - a).collect();
    let e = mean_validation_error(&errors)?;
    Ok(SeedAccuracy {
        seed,
        mean_validation_error: e,
        accuracy: 100.0 - e,
    })
}

pub fn iris_summary(exp: &Experiment, folds: usize, runs: &[RunRecord]) -> Result<IrisSummary> {
    let per_seed = exp
        .seeds
        .iter()
        .map(|&seed| {
            let acc: Vec<f64> = runs
                .iter()
                .filter(|r| r.seed == seed)
                .map(|r| r.validation_accuracy.expect("iris runs carry an accuracy"))
                .collect();
            seed_accuracy(seed, &acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let acc: Vec<f64> = per_seed.iter().map(|s| s.accuracy).collect();
    let (best, median) = best_and_median(&acc, false);
    let label = exp.table_label();
    let reference = iris_reference(&label);
    Ok(IrisSummary {
        training_set: label,
        train_per_class: exp.cv.train_size_per_class,
        scheme: exp.scheme,
        folds,
        seeds: per_seed.len(),
        best_accuracy: acc[best],
        best_seed: per_seed[best].seed,
        median_accuracy: acc[median],
        median_seed: per_seed[median].seed,
        spikeprop: reference.map(|r| r.spikeprop),
        quickprop: reference.map(|r| r.quickprop),
        rprop: reference.map(|r| r.rprop),
        reference_accuracy: reference.map(|r| r.for_scheme(exp.scheme)),
        per_seed,
    })
}
