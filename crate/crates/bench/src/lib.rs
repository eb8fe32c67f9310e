//! Fixed inputs shared by the benchmarks.

use quathyp::normal_forms::{sample, Sample};
use quathyp::{DynamicalType, Field};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `per_type` samples of every dynamical type, reproducible from `seed`.
pub fn fixtures(field: Field, per_type: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DynamicalType::ALL
        .into_iter()
        .flat_map(|t| (0..per_type).map(move |_| t))
        .map(|t| sample(t, field, &mut rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        let a = fixtures(Field::Quaternion, 2, 5);
        assert_eq!(a.len(), 22);
        assert_eq!(a, fixtures(Field::Quaternion, 2, 5));
    }
}
