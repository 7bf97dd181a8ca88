//! Binary genetic algorithm over packed synapse chromosomes.
//!
//! One generation ranks the population by MSE, copies the elite unchanged,
//! and fills the remaining slots with offspring produced by linear-ranking
//! roulette selection, uniform crossover and bit-flip mutation. Training stops
//! when the best MSE reaches the target or the generation budget runs out.
//!
//! All randomness flows through one seeded ChaCha stream consumed on a single
//! thread; fitness evaluation is the only parallel section and its results are
//! merged by index, so a run is reproducible bit-for-bit from its seed.

mod fitness;
mod operators;
mod search;

use std::collections::HashMap;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::Chromosome;
use crate::error::{Error, Result};

pub use fitness::{evaluate_mse, FitnessTask, Pattern, Target};
pub use operators::{
    baker_probabilities, crossover_with_mask, mutate, select_parent, uniform_crossover,
};
pub use search::{exhaustive_search, EXHAUSTIVE_MAX_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub crossover_rate: f64,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    pub selective_pressure: f64,
    pub elite_count: usize,
    pub max_generations: usize,
    /// Training stops once the best MSE is at or below this value (ms^2).
    pub target_mse: f64,
    pub rng_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 200,
            crossover_rate: 0.6,
            mutation_rate: 0.01,
            selective_pressure: 1.5,
            elite_count: 8,
            max_generations: 600,
            target_mse: 0.0,
            rng_seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} must lie in [0, 1], got {v}"
                )))
            }
        };
        prob("crossover_rate", self.crossover_rate)?;
        prob("mutation_rate", self.mutation_rate)?;
        if !(self.selective_pressure > 1.0 && self.selective_pressure <= 2.0) {
            return Err(Error::Parameter(format!(
                "selective_pressure must lie in (1, 2], got {}",
                self.selective_pressure
            )));
        }
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "population_size must be even and >= 2, got {}",
                self.population_size
            )));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::Parameter(format!(
                "elite_count ({}) must be smaller than population_size ({})",
                self.elite_count, self.population_size
            )));
        }
        if self.target_mse.is_nan() {
            return Err(Error::Parameter("target_mse is NaN".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub mse: Option<f64>,
}

impl Individual {
    pub fn new(chromosome: Chromosome) -> Self {
        Individual {
            chromosome,
            mse: None,
        }
    }

    fn mse_or_inf(&self) -> f64 {
        self.mse.unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    individuals: Vec<Individual>,
    /// Objective evaluations spent building this population.
    evaluations: usize,
}

impl Population {
    /// Fair-coin bits, unevaluated.
    pub fn random<R: Rng + ?Sized>(size: usize, chromosome_len: usize, rng: &mut R) -> Self {
        let individuals = (0..size)
            .map(|_| {
                Individual::new(Chromosome::new(
                    (0..chromosome_len).map(|_| rng.gen()).collect(),
                ))
            })
            .collect();
        Population {
            individuals,
            evaluations: 0,
        }
    }

    pub fn from_individuals(individuals: Vec<Individual>) -> Self {
        Population {
            individuals,
            evaluations: 0,
        }
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn is_evaluated(&self) -> bool {
        self.individuals.iter().all(|i| i.mse.is_some())
    }

    /// Scores every individual that has no MSE yet.
    pub fn evaluate(&mut self, task: &FitnessTask) -> Result<()> {
        let pending: Vec<usize> = (0..self.len())
            .filter(|&i| self.individuals[i].mse.is_none())
            .collect();
        let scores = evaluate_batch(
            task,
            pending.iter().map(|&i| &self.individuals[i].chromosome),
        )?;
        for (i, mse) in pending.iter().zip(scores) {
            self.individuals[*i].mse = Some(mse);
        }
        self.evaluations += pending.len();
        Ok(())
    }

    /// Indices sorted by ascending MSE; ties keep population order.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.individuals[a]
                .mse_or_inf()
                .total_cmp(&self.individuals[b].mse_or_inf())
        });
        idx
    }

    pub fn best(&self) -> Option<&Individual> {
        self.ranked_indices().first().map(|&i| &self.individuals[i])
    }

    pub fn mean_mse(&self) -> Option<f64> {
        let scores: Option<Vec<f64>> = self.individuals.iter().map(|i| i.mse).collect();
        let scores = scores?;
        (!scores.is_empty()).then(|| scores.iter().sum::<f64>() / scores.len() as f64)
    }
}

fn evaluate_batch<'a, I>(task: &FitnessTask, chromosomes: I) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'a Chromosome>,
{
    let batch: Vec<&Chromosome> = chromosomes.into_iter().collect();
    batch.par_iter().map(|c| evaluate_mse(c, task)).collect()
}

/// Produces the next generation from an evaluated population.
///
/// The elite pass through unchanged; offspring are evaluated before return.
/// Offspring identical to a member of `pop` (or to an earlier offspring)
/// reuse that score instead of being simulated again.
pub fn step_generation<R: Rng + ?Sized>(
    pop: &Population,
    params: &GaParams,
    task: &FitnessTask,
    rng: &mut R,
) -> Result<Population> {
    params.validate()?;
    if pop.len() != params.population_size {
        return Err(Error::Structural(format!(
            "population has {} individuals, parameters say {}",
            pop.len(),
            params.population_size
        )));
    }
    if !pop.is_evaluated() {
        return Err(Error::Structural(
            "step_generation needs an evaluated population".into(),
        ));
    }

    let ranked = pop.ranked_indices();
    let probs = baker_probabilities(pop.len(), params.selective_pressure)?;
    let mut next: Vec<Individual> = ranked[..params.elite_count]
        .iter()
        .map(|&i| pop.individuals[i].clone())
        .collect();

    let needed = params.population_size - params.elite_count;
    let mut children = Vec::with_capacity(needed + 1);
    while children.len() < needed {
        let a = &pop.individuals[ranked[select_parent(&probs, rng)]].chromosome;
        let b = &pop.individuals[ranked[select_parent(&probs, rng)]].chromosome;
        let (c1, c2) = if rng.gen_bool(params.crossover_rate) {
            uniform_crossover(a, b, rng)?
        } else {
            (a.clone(), b.clone())
        };
        children.push(mutate(&c1, params.mutation_rate, rng));
        children.push(mutate(&c2, params.mutation_rate, rng));
    }
    children.truncate(needed);

    let mut known: HashMap<&Chromosome, f64> = pop
        .individuals
        .iter()
        .filter_map(|ind| ind.mse.map(|m| (&ind.chromosome, m)))
        .collect();
    let mut fresh: Vec<&Chromosome> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for c in &children {
        if !known.contains_key(c) && seen.insert(c) {
            fresh.push(c);
        }
    }
    let scores = evaluate_batch(task, fresh.iter().copied())?;
    let evaluations = fresh.len();
    known.extend(fresh.into_iter().zip(scores));

    next.extend(children.iter().map(|c| Individual {
        chromosome: c.clone(),
        mse: Some(known[c]),
    }));
    Ok(Population {
        individuals: next,
        evaluations,
    })
}

/// One row of the training log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_mse: f64,
    pub mean_mse: f64,
    pub evaluations_total: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub best: Individual,
    /// Completed `step_generation` calls.
    pub generations_run: usize,
    /// Best MSE of the initial population followed by one entry per generation.
    pub mse_history: Vec<f64>,
    pub converged: bool,
    pub log: Vec<GenerationRecord>,
}

impl TrainReport {
    pub fn best_mse(&self) -> f64 {
        self.best.mse.expect("reported individuals are evaluated")
    }
}

/// Writes the training log as `generation,best_mse,mean_mse,evaluations_total`.
pub fn write_log_csv<W: Write>(log: &[GenerationRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "generation,best_mse,mean_mse,evaluations_total")?;
    for r in log {
        writeln!(
            out,
            "{},{},{},{}",
            r.generation, r.best_mse, r.mean_mse, r.evaluations_total
        )?;
    }
    Ok(())
}

fn record(generation: usize, pop: &Population, evaluations_total: usize) -> GenerationRecord {
    GenerationRecord {
        generation,
        best_mse: pop.best().and_then(|b| b.mse).expect("evaluated"),
        mean_mse: pop.mean_mse().expect("evaluated"),
        evaluations_total,
    }
}

/// Runs the genetic algorithm from a random population seeded by `params.rng_seed`.
pub fn train(params: &GaParams, task: &FitnessTask) -> Result<TrainReport> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let mut pop = Population::random(params.population_size, task.chromosome_len(), &mut rng);
    pop.evaluate(task)?;

    let mut evaluations_total = pop.evaluations();
    let mut log = vec![record(0, &pop, evaluations_total)];
    let mut generation = 0;
    let converged = loop {
        let best = log.last().unwrap().best_mse;
        if best <= params.target_mse {
            break true;
        }
        if generation >= params.max_generations {
            break false;
        }
        pop = step_generation(&pop, params, task, &mut rng)?;
        generation += 1;
        evaluations_total += pop.evaluations();
        log.push(record(generation, &pop, evaluations_total));
        log::debug!(
            "seed {} generation {generation}: best {} mean {}",
            params.rng_seed,
            log.last().unwrap().best_mse,
            log.last().unwrap().mean_mse
        );
    };

    Ok(TrainReport {
        best: pop.best().cloned().expect("non-empty population"),
        generations_run: generation,
        mse_history: log.iter().map(|r| r.best_mse).collect(),
        converged,
        log,
    })
}
