//! Feed-forward spiking neural networks with limited-precision synapses.
//!
//! Every synapse carries a 3-bit weight and a 3-bit delay. Networks are
//! simulated with the Spike Response Model on a fixed time grid and trained by
//! a binary genetic algorithm operating directly on the packed synapse bits.
//!
//! - [`srm`]: kernels and the time-stepped network simulator
//! - [`codec`]: weight/delay codebooks, genes, chromosomes and genome files
//! - [`ga`]: the genetic algorithm, MSE objective and brute-force oracle
//! - [`encoders`]: XOR and Gaussian-receptive-field spike coding, class decoding
//! - [`datasets`]: the iris dataset and stratified K-fold plans

// `!(x > 0.0)` is used on purpose so NaN parameters are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod datasets;
pub mod encoders;
pub mod error;
pub mod ga;
pub mod srm;

pub use codec::{Chromosome, Genome, SynapseGene, WeightScheme};
pub use error::{Error, Result};
pub use ga::{FitnessTask, GaParams, Individual, Pattern, Population, Target, TrainReport};
pub use srm::{PspShape, SimParams, Simulator, SpikeTrain, SynapseValue, Topology};
