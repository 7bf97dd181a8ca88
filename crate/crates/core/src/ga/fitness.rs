use crate::codec::{decode_chromosome, Chromosome, WeightScheme, GENE_BITS};
use crate::error::{Error, Result};
use crate::srm::{SimParams, Simulator, SpikeTrain, Stimulus, Topology, Wiring};

/// Desired output of one pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    /// First output spike at this time (ms).
    At(f64),
    /// The output neuron should stay silent.
    Silent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub inputs: Vec<SpikeTrain>,
    pub target: Target,
}

/// Everything the objective needs: network shape, codebook, simulator and
/// the training patterns, with input spikes pre-converted to grid steps.
///
/// The network must have a single output neuron. A silent output is scored
/// as if it fired at the end of the simulation window, and a
/// [`Target::Silent`] pattern wants exactly that time.
#[derive(Debug, Clone)]
pub struct FitnessTask {
    topology: Topology,
    scheme: WeightScheme,
    simulator: Simulator,
    patterns: Vec<Pattern>,
    stimuli: Vec<Stimulus>,
}

impl FitnessTask {
    pub fn new(
        topology: Topology,
        scheme: WeightScheme,
        sim: SimParams,
        patterns: Vec<Pattern>,
    ) -> Result<Self> {
        if patterns.is_empty() {
            return Err(Error::Structural(
                "a fitness task needs at least one pattern".into(),
            ));
        }
        if topology.output_size() != 1 {
            return Err(Error::Structural(format!(
                "the objective reads a single output neuron; topology {topology} has {}",
                topology.output_size()
            )));
        }
        let simulator = Simulator::new(sim)?;
        let mut stimuli = Vec::with_capacity(patterns.len());
        for (k, p) in patterns.iter().enumerate() {
            if p.inputs.len() != topology.input_size() {
                return Err(Error::Structural(format!(
                    "pattern {k} has {} input trains, topology {topology} expects {}",
                    p.inputs.len(),
                    topology.input_size()
                )));
            }
            if let Target::At(t) = p.target {
                if !(0.0..=sim.sim_time_ms).contains(&t) {
                    return Err(Error::Parameter(format!(
                        "pattern {k} target {t} ms lies outside [0, {}]",
                        sim.sim_time_ms
                    )));
                }
            }
            stimuli.push(simulator.stimulus(&p.inputs)?);
        }
        Ok(FitnessTask {
            topology,
            scheme,
            simulator,
            patterns,
            stimuli,
        })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn sim_params(&self) -> &SimParams {
        self.simulator.params()
    }

    pub fn simulator(&self) -> &Simulator {
        &self.simulator
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn stimuli(&self) -> &[Stimulus] {
        &self.stimuli
    }

    pub fn chromosome_len(&self) -> usize {
        GENE_BITS * self.topology.synapse_count()
    }

    pub fn wire(&self, c: &Chromosome) -> Result<Wiring> {
        let synapses = decode_chromosome(c, &self.topology, self.scheme)?;
        self.simulator.wire(&self.topology, &synapses)
    }

    /// First output spike of every pattern.
    pub fn first_spikes(&self, c: &Chromosome) -> Result<Vec<Option<f64>>> {
        let wiring = self.wire(c)?;
        self.stimuli
            .iter()
            .map(|stim| Ok(self.simulator.first_output_spikes(&wiring, stim)?[0]))
            .collect()
    }

    /// Full output spike train of every pattern.
    pub fn output_trains(&self, c: &Chromosome) -> Result<Vec<SpikeTrain>> {
        let wiring = self.wire(c)?;
        self.stimuli
            .iter()
            .map(|stim| {
                Ok(self
                    .simulator
                    .run(&wiring, stim)?
                    .pop()
                    .expect("one output neuron"))
            })
            .collect()
    }

    /// Target time used by the objective; silent targets map to the window end.
    pub fn desired_time(&self, target: Target) -> f64 {
        match target {
            Target::At(t) => t,
            Target::Silent => self.sim_params().sim_time_ms,
        }
    }

    /// Mean squared spike-time error given each pattern's first output spike.
    pub fn mse_of(&self, first_spikes: &[Option<f64>]) -> f64 {
        let end = self.sim_params().sim_time_ms;
        let sum: f64 = first_spikes
            .iter()
            .zip(&self.patterns)
            .map(|(actual, p)| {
                let err = actual.unwrap_or(end) - self.desired_time(p.target);
                err * err
            })
            .sum();
        sum / self.patterns.len() as f64
    }
}

/// Mean squared error (ms^2) between the output neuron's first spike and the
/// target, averaged over the task's patterns.
pub fn evaluate_mse(c: &Chromosome, task: &FitnessTask) -> Result<f64> {
    let firsts = task.first_spikes(c)?;
    Ok(task.mse_of(&firsts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::SynapseGene;

    fn xor_like_task() -> FitnessTask {
        let one = |t: f64| SpikeTrain::single(t).unwrap();
        let patterns = [
            (1.0, 1.0, 17.0),
            (1.0, 7.0, 10.0),
            (7.0, 1.0, 10.0),
            (7.0, 7.0, 17.0),
        ]
        .iter()
        .map(|&(a, b, t)| Pattern {
            inputs: vec![one(1.0), one(a), one(b)],
            target: Target::At(t),
        })
        .collect();
        FitnessTask::new(
            "3-1".parse().unwrap(),
            WeightScheme::Integer,
            SimParams::default(),
            patterns,
        )
        .unwrap()
    }

    #[test]
    fn mse_of_examples() {
        let task = xor_like_task();
        let exact = [Some(17.0), Some(10.0), Some(10.0), Some(17.0)];
        assert_eq!(task.mse_of(&exact), 0.0);
        let one_off = [Some(17.0), Some(12.0), Some(10.0), Some(17.0)];
        assert_eq!(task.mse_of(&one_off), 1.0);
        // silent output scores as 50 ms: (50 - 17)^2 / 4
        let silent_first = [None, Some(10.0), Some(10.0), Some(17.0)];
        assert_eq!(task.mse_of(&silent_first), 1089.0 / 4.0);
    }

    #[test]
    fn silent_network_scores_surrogate() {
        let task = xor_like_task();
        // weight index 3 is 0 in both codebooks
        let zero = SynapseGene::new(3, 0).unwrap();
        let c = Chromosome::from_genes(&[zero; 3]);
        let mse = evaluate_mse(&c, &task).unwrap();
        assert_eq!(mse, (33.0f64.powi(2) * 2.0 + 40.0f64.powi(2) * 2.0) / 4.0);
    }

    #[test]
    fn silent_target_matches_silence() {
        let one = |t: f64| SpikeTrain::single(t).unwrap();
        let task = FitnessTask::new(
            "1-1".parse().unwrap(),
            WeightScheme::Integer,
            SimParams::default(),
            vec![Pattern {
                inputs: vec![one(1.0)],
                target: Target::Silent,
            }],
        )
        .unwrap();
        let c = Chromosome::from_genes(&[SynapseGene::new(3, 0).unwrap()]);
        assert_eq!(evaluate_mse(&c, &task).unwrap(), 0.0);
    }

    #[test]
    fn task_validation() {
        let one = |t: f64| SpikeTrain::single(t).unwrap();
        let sim = SimParams::default();
        assert!(
            FitnessTask::new("1-1".parse().unwrap(), WeightScheme::Integer, sim, vec![]).is_err()
        );
        let p = Pattern {
            inputs: vec![one(1.0)],
            target: Target::At(10.0),
        };
        assert!(FitnessTask::new(
            "1-2".parse().unwrap(),
            WeightScheme::Integer,
            sim,
            vec![p.clone()]
        )
        .is_err());
        assert!(FitnessTask::new(
            "2-1".parse().unwrap(),
            WeightScheme::Integer,
            sim,
            vec![p.clone()]
        )
        .is_err());
        let late = Pattern {
            target: Target::At(60.0),
            ..p
        };
        assert!(FitnessTask::new(
            "1-1".parse().unwrap(),
            WeightScheme::Integer,
            sim,
            vec![late]
        )
        .is_err());
        let task = xor_like_task();
        assert!(matches!(
            evaluate_mse(&Chromosome::zeros(12), &task),
            Err(Error::Structural(_))
        ));
    }
}
