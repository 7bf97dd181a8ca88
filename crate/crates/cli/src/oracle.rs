//! Brute-force optimum for small networks.

use std::path::{Path, PathBuf};

use lpsnn_core::ga::exhaustive_search;
use lpsnn_core::Genome;

use crate::config::Experiment;
use crate::error::{HarnessError, Result};
use crate::eval::{eval_genome, pattern_set, task_for, PatternSpec};
use crate::reference::xor_reference_mse;

#[derive(Debug, Clone, PartialEq)]
pub struct StoredComparison {
    pub path: PathBuf,
    pub stored_mse: f64,
    pub equals_optimum: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub bits: usize,
    pub genome: Genome,
    pub mse: f64,
    pub reference_mse: Option<f64>,
    pub comparisons: Vec<StoredComparison>,
}

/// Enumerates every chromosome of the configured network and compares the
/// global optimum with any stored genomes.
pub fn enumerate_oracle(exp: &Experiment, compare: &[&Path]) -> Result<OracleReport> {
    let set = pattern_set(exp, PatternSpec::default_for(exp.task))?;
    let probe = Genome::new(
        exp.scheme,
        exp.topology.clone(),
        lpsnn_core::Chromosome::zeros(exp.topology.synapse_count() * lpsnn_core::codec::GENE_BITS),
    )?;
    let task = task_for(&probe, exp, &set)?;
    log::info!(
        "enumerating {} chromosomes of {} bits",
        1u64 << task.chromosome_len().min(63),
        task.chromosome_len()
    );
    let (chromosome, mse) = exhaustive_search(&task)?;
    let genome = Genome::new(exp.scheme, exp.topology.clone(), chromosome)?;
    let comparisons = compare
        .iter()
        .map(|&path| {
            let stored = Genome::read(path).map_err(|e| HarnessError::genome(path, e))?;
            let stored_mse = eval_genome(&stored, exp, &set)?.mse;
            Ok(StoredComparison {
                path: path.to_path_buf(),
                stored_mse,
                equals_optimum: stored_mse == mse,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport {
        bits: task.chromosome_len(),
        reference_mse: xor_reference_mse(&exp.topology.to_string(), exp.scheme, exp.sim.dt),
        genome,
        mse,
        comparisons,
    })
}

impl OracleReport {
    pub fn render(&self) -> String {
        let mut s = format!("global optimum over {} bits: mse {}\n", self.bits, self.mse);
        s.push_str(&format!("optimal genome:\n{}", self.genome));
        if let Some(r) = self.reference_mse {
            s.push_str(&format!(
                "reference value: {r}{}\n",
                if r == self.mse { "" } else { " (differs)" }
            ));
        }
        for c in &self.comparisons {
            s.push_str(&format!(
                "{}: mse {} {}\n",
                c.path.display(),
                c.stored_mse,
                if c.equals_optimum {
                    "== optimum"
                } else {
                    "!= optimum"
                }
            ));
        }
        s
    }
}
