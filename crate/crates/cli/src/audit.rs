//! Recomputes every table cell of an experiment directory from its stored genomes.

use std::fmt;
use std::path::Path;

use lpsnn_core::datasets::bundled_iris;
use lpsnn_core::Genome;

use crate::config::{ExperimentConfig, TaskKind};
use crate::error::{HarnessError, Result};
use crate::eval::{eval_genome, fold_plan, iris_pattern_set, xor_pattern_set};
use crate::report::{ResultsReport, RunRecord, Summary, Table, CONFIG_FILE, RUNS_FILE};
use crate::runner::{iris_summary, xor_summary};

#[derive(Debug, Clone, PartialEq)]
pub struct AuditCell {
    pub file: &'static str,
    pub row: usize,
    pub column: String,
    pub stored: String,
    pub recomputed: String,
}

impl AuditCell {
    pub fn matches(&self) -> bool {
        self.stored == self.recomputed
    }
}

impl fmt::Display for AuditCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} row {} {}: stored {:?}, recomputed {:?}",
            self.file, self.row, self.column, self.stored, self.recomputed
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub cells: Vec<AuditCell>,
}

impl AuditReport {
    pub fn mismatches(&self) -> Vec<&AuditCell> {
        self.cells.iter().filter(|c| !c.matches()).collect()
    }

    pub fn passed(&self) -> bool {
        !self.cells.is_empty() && self.mismatches().is_empty()
    }
}

fn field<'a>(table: &Table, row: &'a [String], name: &str, path: &Path) -> Result<&'a str> {
    table
        .get(row, name)
        .ok_or_else(|| HarnessError::file(path, format!("missing column {name}")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str, path: &Path) -> Result<T> {
    s.parse()
        .map_err(|_| HarnessError::file(path, format!("cannot parse {what} from {s:?}")))
}

fn log_generations(path: &Path) -> Result<usize> {
    let log = Table::read(path)?;
    log.rows
        .len()
        .checked_sub(1)
        .ok_or_else(|| HarnessError::file(path, "training log has no rows"))
}

/// Re-evaluates each stored genome, rebuilds every CSV table and compares it
/// cell by cell with what is on disk.
///
/// MSE and accuracy cells come from fresh inference; generation counts come
/// from the stored training logs; convergence is re-derived from the
/// recomputed MSE and the configured target.
pub fn audit(dir: &Path) -> Result<AuditReport> {
    let mut cfg = ExperimentConfig::load(&dir.join(CONFIG_FILE))?;
    cfg.output_dir = Some(dir.to_path_buf());
    let exp = cfg.resolve()?;

    let runs_path = dir.join(RUNS_FILE);
    let runs_table = Table::read(&runs_path)?;
    let samples = bundled_iris();
    let plan = match exp.task {
        TaskKind::Iris => Some(fold_plan(&exp)?),
        TaskKind::Xor => None,
    };

    let mut runs = Vec::with_capacity(runs_table.rows.len());
    for row in &runs_table.rows {
        let seed: u64 = parse(
            field(&runs_table, row, "seed", &runs_path)?,
            "seed",
            &runs_path,
        )?;
        let fold_field = field(&runs_table, row, "fold", &runs_path)?;
        let fold: Option<usize> = if fold_field.is_empty() {
            None
        } else {
            Some(parse(fold_field, "fold", &runs_path)?)
        };
        let genome_rel = field(&runs_table, row, "genome", &runs_path)?.to_string();
        let log_rel = field(&runs_table, row, "log", &runs_path)?.to_string();
        let genome_path = dir.join(&genome_rel);
        let genome =
            Genome::read(&genome_path).map_err(|e| HarnessError::genome(&genome_path, e))?;

        let (train_set, val_set) = match (&plan, fold) {
            (None, _) => (xor_pattern_set(&exp), None),
            (Some(plan), Some(k)) => {
                let f = plan.folds.get(k).ok_or_else(|| {
                    HarnessError::file(&runs_path, format!("fold {k} not in the plan"))
                })?;
                (
                    iris_pattern_set(&exp, &samples, &f.train)?,
                    Some(iris_pattern_set(&exp, &samples, &f.validation)?),
                )
            }
            (Some(_), None) => {
                return Err(HarnessError::file(&runs_path, "iris run without a fold"))
            }
        };
        let best_mse = eval_genome(&genome, &exp, &train_set)?.mse;
        let validation_accuracy = match &val_set {
            Some(v) => eval_genome(&genome, &exp, v)?.accuracy,
            None => None,
        };
        runs.push(RunRecord {
            seed,
            fold,
            best_mse,
            generations_run: log_generations(&dir.join(&log_rel))?,
            converged: best_mse <= exp.ga.target_mse,
            validation_accuracy,
            genome: genome_rel,
            log: log_rel,
        });
    }
    if runs.is_empty() {
        return Err(HarnessError::file(&runs_path, "no runs recorded"));
    }

    let summary = match &plan {
        None => Summary::Xor(xor_summary(&exp, &runs)),
        Some(plan) => Summary::Iris(iris_summary(&exp, plan.folds.len(), &runs)?),
    };
    let recomputed = ResultsReport { runs, summary };

    let mut cells = Vec::new();
    for (name, text) in recomputed.csv_files() {
        let path = dir.join(name);
        let stored = Table::read(&path)?;
        let fresh = Table::parse(&text).expect("generated tables are well-formed");
        if stored.header != fresh.header || stored.rows.len() != fresh.rows.len() {
            return Err(HarnessError::file(
                &path,
                "table shape differs from the recomputed one",
            ));
        }
        for (r, (a, b)) in stored.rows.iter().zip(&fresh.rows).enumerate() {
            for (c, column) in fresh.header.iter().enumerate() {
                cells.push(AuditCell {
                    file: name,
                    row: r + 1,
                    column: column.clone(),
                    stored: a[c].clone(),
                    recomputed: b[c].clone(),
                });
            }
        }
    }
    Ok(AuditReport { cells })
}
