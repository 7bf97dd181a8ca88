//! Selection, crossover and mutation on bit-string chromosomes.

use rand::Rng;

use crate::codec::Chromosome;
use crate::error::{Error, Result};

/// Linear ranking probabilities, best rank first.
///
/// Rank `r` (1-based) receives `(SP - 2 (SP - 1) (r - 1) / (N - 1)) / N`, so the
/// best-to-worst ratio is `SP / (2 - SP)` and the probabilities sum to one.
pub fn baker_probabilities(ranked_count: usize, selective_pressure: f64) -> Result<Vec<f64>> {
    if ranked_count < 2 {
        return Err(Error::Parameter(format!(
            "ranking needs at least 2 individuals, got {ranked_count}"
        )));
    }
    if !(1.0..=2.0).contains(&selective_pressure) {
        return Err(Error::Parameter(format!(
            "selective pressure must lie in [1, 2], got {selective_pressure}"
        )));
    }
    let n = ranked_count as f64;
    let sp = selective_pressure;
    Ok((0..ranked_count)
        .map(|r| (sp - 2.0 * (sp - 1.0) * r as f64 / (n - 1.0)) / n)
        .collect())
}

/// Roulette-wheel draw: index `i` is returned with probability `probs[i]`.
pub fn select_parent<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let spin: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if spin < acc {
            return i;
        }
    }
    // rounding left the cumulative sum just under the spin
    probs
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probs.len() - 1)
}

/// Exchanges bits where `mask` is set: the first child takes `a` where the
/// mask is clear and `b` where it is set, the second child the complement.
pub fn crossover_with_mask(
    a: &Chromosome,
    b: &Chromosome,
    mask: &[bool],
) -> Result<(Chromosome, Chromosome)> {
    if a.len() != b.len() || a.len() != mask.len() {
        return Err(Error::Structural(format!(
            "crossover needs equal lengths, got {}, {} and mask {}",
            a.len(),
            b.len(),
            mask.len()
        )));
    }
    let (c1, c2) = a
        .bits()
        .iter()
        .zip(b.bits())
        .zip(mask)
        .map(|((&x, &y), &m)| if m { (y, x) } else { (x, y) })
        .unzip();
    Ok((Chromosome::new(c1), Chromosome::new(c2)))
}

/// Uniform crossover with a fair-coin mask.
pub fn uniform_crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    if a.len() != b.len() {
        return Err(Error::Structural(format!(
            "crossover needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mask: Vec<bool> = (0..a.len()).map(|_| rng.gen()).collect();
    crossover_with_mask(a, b, &mask)
}

/// Flips each bit independently with probability `rate`.
pub fn mutate<R: Rng + ?Sized>(c: &Chromosome, rate: f64, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    for bit in out.bits_mut() {
        if rng.gen_bool(rate) {
            *bit = !*bit;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn baker_four() {
        let p = baker_probabilities(4, 1.5).unwrap();
        let expected = [
            0.375,
            0.291_666_666_666_666_7,
            0.208_333_333_333_333_3,
            0.125,
        ];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((p[0] / p[3] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn baker_two_and_limits() {
        assert_eq!(baker_probabilities(2, 1.5).unwrap(), vec![0.75, 0.25]);
        for n in [2, 7, 200] {
            let p = baker_probabilities(n, 1.0 + 1e-12).unwrap();
            assert!(p.iter().all(|x| (x - 1.0 / n as f64).abs() < 1e-12));
        }
        assert!(baker_probabilities(1, 1.5).is_err());
        assert!(baker_probabilities(4, 2.5).is_err());
        assert!(baker_probabilities(4, 0.5).is_err());
    }

    #[test]
    fn select_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(select_parent(&[1.0], &mut rng), 0);
            assert_eq!(select_parent(&[0.0, 1.0], &mut rng), 1);
        }
    }

    #[test]
    fn select_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let probs = baker_probabilities(4, 1.5).unwrap();
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|_| select_parent(&probs, &mut rng) == 0)
            .count();
        assert!((hits as f64 / draws as f64 - 0.375).abs() < 0.01);
    }

    #[test]
    fn crossover_identity_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Chromosome = "110010".parse().unwrap();
        let (c1, c2) = uniform_crossover(&a, &a, &mut rng).unwrap();
        assert_eq!((c1, c2), (a.clone(), a.clone()));
        let b: Chromosome = "011101".parse().unwrap();
        let (c1, c2) = crossover_with_mask(&a, &b, &[false; 6]).unwrap();
        assert_eq!((c1, c2), (a.clone(), b.clone()));
        let (c1, c2) = crossover_with_mask(&a, &b, &[true; 6]).unwrap();
        assert_eq!((c1, c2), (b, a.clone()));
        assert!(uniform_crossover(&a, &Chromosome::zeros(5), &mut rng).is_err());
    }

    #[test]
    fn crossover_exchange_exhaustive() {
        // all parent pairs and masks over 4 bits
        for a in 0..16u64 {
            for b in 0..16u64 {
                for m in 0..16u64 {
                    let (pa, pb) = (Chromosome::from_index(a, 4), Chromosome::from_index(b, 4));
                    let mask = Chromosome::from_index(m, 4);
                    let (c1, c2) = crossover_with_mask(&pa, &pb, mask.bits()).unwrap();
                    for k in 0..4 {
                        let mut parents = [pa.bits()[k], pb.bits()[k]];
                        let mut children = [c1.bits()[k], c2.bits()[k]];
                        parents.sort();
                        children.sort();
                        assert_eq!(parents, children);
                    }
                }
            }
        }
    }

    #[test]
    fn mutation_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let c: Chromosome = "1100101".parse().unwrap();
        assert_eq!(mutate(&c, 0.0, &mut rng), c);
        assert_eq!(mutate(&c, 1.0, &mut rng).to_string(), "0011010");
    }

    #[test]
    fn mutation_mean_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = Chromosome::zeros(120);
        let trials = 10_000;
        let flips: usize = (0..trials)
            .map(|_| {
                mutate(&c, 0.01, &mut rng)
                    .bits()
                    .iter()
                    .filter(|&&b| b)
                    .count()
            })
            .sum();
        assert!((flips as f64 / trials as f64 - 1.2).abs() < 0.1);
    }
}
