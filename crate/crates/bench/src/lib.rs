//! Seeded inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skyscraper_core::{fixtures, GradedMatrix, PrimeField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A module generated at one degree with the given thickness, degrees in
/// `(1/2)Z ∩ [0, 4]`.
pub fn uniquely_generated(q: u32, thickness: usize, seed: u64) -> GradedMatrix {
    let f = PrimeField::new(q).expect("prime");
    fixtures::random_uniquely_generated(f, thickness, 4, 2, &mut rng(seed))
}

/// A bounded module with several generators over F_2.
pub fn module(gens: usize, rels: usize, seed: u64) -> GradedMatrix {
    let f = PrimeField::new(2).expect("prime");
    fixtures::random_module(f, gens, rels, 4, 2, &mut rng(seed))
}
