use rayon::prelude::*;

use super::fitness::{evaluate_mse, FitnessTask};
use crate::codec::Chromosome;
use crate::error::{Error, Result};

/// Largest chromosome the brute-force oracle will enumerate.
pub const EXHAUSTIVE_MAX_BITS: usize = 24;

/// Global minimum of the objective over every chromosome of the task's length.
///
/// Ties go to the lowest bit string read MSB-first.
pub fn exhaustive_search(task: &FitnessTask) -> Result<(Chromosome, f64)> {
    let bits = task.chromosome_len();
    if bits > EXHAUSTIVE_MAX_BITS {
        return Err(Error::SearchTooLarge {
            bits,
            limit: EXHAUSTIVE_MAX_BITS,
        });
    }
    let (mse, index) = (0..1u64 << bits)
        .into_par_iter()
        .map(|i| evaluate_mse(&Chromosome::from_index(i, bits), task).map(|m| (m, i)))
        .try_reduce(
            || (f64::INFINITY, u64::MAX),
            |a, b| {
                Ok(if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                })
            },
        )?;
    Ok((Chromosome::from_index(index, bits), mse))
}
