//! Roulette-wheel selection: each entry owns a slice of the wheel
//! proportional to its weight.

use rand::Rng;

use crate::error::RouteError;
use crate::ga::FitnessRecord;
use crate::path_enum::Chromosome;
use crate::scalar::Scalar;

/// Picks an index with probability proportional to its weight. Exactly one
/// uniform draw is consumed. Errors when every weight is zero.
pub(crate) fn roulette_pick_f64<R: Rng>(weights: &[f64], rng: &mut R) -> Result<usize, RouteError> {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    if total <= 0.0 {
        return Err(RouteError::DegenerateWheel);
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, w) in weights.iter().enumerate() {
        let w = w.max(0.0);
        if w > 0.0 {
            acc += w;
            last_positive = i;
            if target < acc {
                return Ok(i);
            }
        }
    }
    // Float rounding can leave target == acc; land on the last real slice.
    Ok(last_positive)
}

/// Scalar-weight wrapper around [`roulette_pick_f64`].
pub fn roulette_pick<S: Scalar, R: Rng>(weights: &[S], rng: &mut R) -> Result<usize, RouteError> {
    let weights: Vec<f64> = weights.iter().map(|w| w.to_f64_lossy()).collect();
    roulette_pick_f64(&weights, rng)
}

/// Spins the wheel over a population's fitness values and returns the
/// selected chromosome. Deterministic given the RNG state; errors when all
/// fitness values are zero.
pub fn roulette_select<'a, S: Scalar, R: Rng>(
    records: &'a [FitnessRecord<S>],
    rng: &mut R,
) -> Result<&'a Chromosome, RouteError> {
    let weights: Vec<f64> = records.iter().map(|r| r.fitness.to_f64_lossy()).collect();
    let idx = roulette_pick_f64(&weights, rng)?;
    Ok(&records[idx].chromosome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_wheel_always_picks_the_only_slice() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            assert_eq!(roulette_pick(&[1.0, 0.0, 0.0], &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn all_zero_weights_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(
            roulette_pick::<f64, _>(&[0.0, 0.0], &mut rng),
            Err(RouteError::DegenerateWheel)
        );
    }

    #[test]
    fn empirical_frequencies_match_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let weights = [0.75, 0.25];
        let draws = 100_000usize;
        let mut hits = [0usize; 2];
        for _ in 0..draws {
            hits[roulette_pick(&weights, &mut rng).unwrap()] += 1;
        }
        let freq0 = hits[0] as f64 / draws as f64;
        assert!((freq0 - 0.75).abs() < 0.01, "frequency {freq0} too far from 0.75");
    }

    #[test]
    fn identical_rng_state_gives_identical_picks() {
        let weights = [0.4, 0.3, 0.2, 0.1];
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(
                roulette_pick(&weights, &mut a).unwrap(),
                roulette_pick(&weights, &mut b).unwrap()
            );
        }
    }
}
