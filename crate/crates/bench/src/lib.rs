//! Shared fixtures for the benchmark targets.

use mwd_core::relation::{random_filtered_relation, random_relation, FilteredRelation, Relation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_relation(dims: &[usize], density: f64, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_relation(dims, density, &mut rng)
}

pub fn seeded_filtered(dims: &[usize], density: f64, seed: u64) -> FilteredRelation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_filtered_relation(dims, density, &mut rng)
}
