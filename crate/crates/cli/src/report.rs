//! Result records and their CSV files.
//!
//! An experiment directory holds `config.toml`, `runs.csv` (one row per GA
//! run), `results.csv` (the summary table row) and, for iris, `seeds.csv`
//! (cross-validated accuracy per seed) and `folds.csv`. Floats are written in
//! shortest round-trip form so every number parses back exactly.

use std::fmt::Display;
use std::fs;
use std::path::Path;

use lpsnn_core::WeightScheme;

use crate::error::{HarnessError, Result};

pub const CONFIG_FILE: &str = "config.toml";
pub const RUNS_FILE: &str = "runs.csv";
pub const RESULTS_FILE: &str = "results.csv";
pub const SEEDS_FILE: &str = "seeds.csv";
pub const FOLDS_FILE: &str = "folds.csv";

/// One GA run: a seed for XOR, a (seed, fold) pair for iris.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub seed: u64,
    pub fold: Option<usize>,
    pub best_mse: f64,
    pub generations_run: usize,
    pub converged: bool,
    pub validation_accuracy: Option<f64>,
    /// Paths relative to the experiment directory.
    pub genome: String,
    pub log: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XorSummary {
    pub architecture: String,
    pub scheme: WeightScheme,
    pub dt: f64,
    pub threshold: f64,
    pub seeds: usize,
    pub best_mse: f64,
    pub best_seed: u64,
    pub median_mse: f64,
    pub median_seed: u64,
    pub converged_seeds: usize,
    /// Lower median over seeds, counting unconverged seeds as never converging.
    pub median_generations: Option<usize>,
    pub reference_mse: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedAccuracy {
    pub seed: u64,
    pub mean_validation_error: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrisSummary {
    pub training_set: String,
    pub train_per_class: usize,
    pub scheme: WeightScheme,
    pub folds: usize,
    pub seeds: usize,
    pub best_accuracy: f64,
    pub best_seed: u64,
    pub median_accuracy: f64,
    pub median_seed: u64,
    pub spikeprop: Option<f64>,
    pub quickprop: Option<f64>,
    pub rprop: Option<f64>,
    pub reference_accuracy: Option<f64>,
    pub per_seed: Vec<SeedAccuracy>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Summary {
    Xor(XorSummary),
    Iris(IrisSummary),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsReport {
    pub runs: Vec<RunRecord>,
    pub summary: Summary,
}

/// Indices of the best and lower-median entries. Ties keep input order.
pub fn best_and_median(values: &[f64], lower_is_better: bool) -> (usize, usize) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let c = values[a].total_cmp(&values[b]);
        if lower_is_better {
            c
        } else {
            c.reverse()
        }
    });
    (order[0], order[(order.len() - 1) / 2])
}

/// Lower median of convergence generations, `None` standing for "never".
pub fn median_generations(gens: &[Option<usize>]) -> Option<usize> {
    let mut sorted = gens.to_vec();
    sorted.sort_by_key(|g| g.unwrap_or(usize::MAX));
    sorted[(sorted.len() - 1) / 2]
}

fn opt<T: Display>(v: Option<T>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

fn write(path: &Path, text: String) -> Result<()> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub const RUNS_HEADER: &str =
    "seed,fold,best_mse,generations_run,converged,validation_accuracy,genome,log";
pub const XOR_RESULTS_HEADER: &str = "architecture,scheme,dt,threshold,seeds,best_mse,best_seed,median_mse,median_seed,converged_seeds,median_generations,reference_mse";
pub const IRIS_RESULTS_HEADER: &str = "training_set,train_per_class,scheme,folds,seeds,best_accuracy,best_seed,median_accuracy,median_seed,spikeprop,quickprop,rprop,reference_accuracy";
pub const SEEDS_HEADER: &str = "seed,mean_validation_error,accuracy";

impl ResultsReport {
    /// File name and contents of every CSV this report produces.
    pub fn csv_files(&self) -> Vec<(&'static str, String)> {
        let mut runs = format!("{RUNS_HEADER}\n");
        for r in &self.runs {
            runs.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.seed,
                opt(r.fold),
                r.best_mse,
                r.generations_run,
                r.converged,
                opt(r.validation_accuracy),
                r.genome,
                r.log
            ));
        }
        let mut files = vec![(RUNS_FILE, runs)];

        match &self.summary {
            Summary::Xor(s) => files.push((
                RESULTS_FILE,
                format!(
                    "{XOR_RESULTS_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    s.architecture,
                    s.scheme,
                    s.dt,
                    s.threshold,
                    s.seeds,
                    s.best_mse,
                    s.best_seed,
                    s.median_mse,
                    s.median_seed,
                    s.converged_seeds,
                    opt(s.median_generations),
                    opt(s.reference_mse)
                ),
            )),
            Summary::Iris(s) => {
                files.push((
                    RESULTS_FILE,
                    format!(
                        "{IRIS_RESULTS_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                        s.training_set,
                        s.train_per_class,
                        s.scheme,
                        s.folds,
                        s.seeds,
                        s.best_accuracy,
                        s.best_seed,
                        s.median_accuracy,
                        s.median_seed,
                        opt(s.spikeprop),
                        opt(s.quickprop),
                        opt(s.rprop),
                        opt(s.reference_accuracy)
                    ),
                ));
                let mut seeds = format!("{SEEDS_HEADER}\n");
                for a in &s.per_seed {
                    seeds.push_str(&format!(
                        "{},{},{}\n",
                        a.seed, a.mean_validation_error, a.accuracy
                    ));
                }
                files.push((SEEDS_FILE, seeds));
            }
        }
        files
    }

    pub fn write_csvs(&self, dir: &Path) -> Result<()> {
        for (name, text) in self.csv_files() {
            write(&dir.join(name), text)?;
        }
        Ok(())
    }

    /// The summary as an aligned text table for the terminal.
    pub fn render(&self) -> String {
        match &self.summary {
            Summary::Xor(s) => format!(
                "{:<8}{:<10}{:<7}{:>12}{:>12}{:>11}{:>12}{:>10}\n{:<8}{:<10}{:<7}{:>12}{:>12}{:>11}{:>12}{:>10}\n",
                "arch", "scheme", "dt", "best_mse", "median_mse", "converged", "median_gen", "ref",
                s.architecture,
                s.scheme.to_string(),
                s.dt,
                s.best_mse,
                s.median_mse,
                format!("{}/{}", s.converged_seeds, s.seeds),
                s.median_generations.map_or("-".into(), |g| g.to_string()),
                s.reference_mse.map_or("-".into(), |v| v.to_string()),
            ),
            Summary::Iris(s) => {
                let pct = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v}%"));
                format!(
                    "{:<6}{:>10}{:>10}{:>8}{:>14}{:>14}{:>10}\n{:<6}{:>10}{:>10}{:>8}{:>14}{:>14}{:>10}\n",
                    "set", "SpikeProp", "QuickProp", "RProp", "best", "median", "ref",
                    s.training_set,
                    pct(s.spikeprop),
                    pct(s.quickprop),
                    pct(s.rprop),
                    format!("{:.2}%", s.best_accuracy),
                    format!("{:.2}%", s.median_accuracy),
                    pct(s.reference_accuracy),
                )
            }
        }
    }
}

/// Minimal reader for the comma-separated files written above.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Table> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Table::parse(&text).map_err(|m| HarnessError::file(path, m))
    }

    pub fn parse(text: &str) -> std::result::Result<Table, String> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| "empty file".to_string())?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != header.len() {
                return Err(format!(
                    "line {}: expected {} fields, found {}",
                    i + 2,
                    header.len(),
                    row.len()
                ));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn get<'a>(&self, row: &'a [String], name: &str) -> Option<&'a str> {
        self.column(name).map(|i| row[i].as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_and_lower_median() {
        let v = [3.0, 1.0, 2.0, 1.0];
        assert_eq!(best_and_median(&v, true), (1, 3));
        assert_eq!(best_and_median(&v, false), (0, 2));
        assert_eq!(best_and_median(&[5.0], true), (0, 0));
    }

    #[test]
    fn median_generations_treats_none_as_never() {
        assert_eq!(median_generations(&[Some(10), None, Some(30)]), Some(30));
        assert_eq!(median_generations(&[Some(10), None, None]), None);
        assert_eq!(median_generations(&[Some(4), Some(2)]), Some(2));
    }
}
