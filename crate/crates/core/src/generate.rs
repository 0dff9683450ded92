//! Seeded random parity games.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{GameBuilder, OddFairGame, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomGameSpec {
    pub vertices: usize,
    /// Priorities are drawn from `1..=max_priority`.
    pub max_priority: u32,
    pub min_degree: usize,
    pub max_degree: usize,
}

/// Uniform owners and priorities; each vertex gets a uniform number of
/// distinct successors in `min_degree..=max_degree`, self-loops allowed.
pub fn random_game(spec: &RandomGameSpec, seed: u64) -> OddFairGame {
    assert!(spec.vertices > 0 && spec.max_priority > 0 && spec.min_degree > 0);
    assert!(spec.min_degree <= spec.max_degree);
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.vertices;
    let mut b = GameBuilder::new();
    for _ in 0..n {
        let owner = if r.random_bool(0.5) { Player::Odd } else { Player::Even };
        let p = r.random_range(1..=spec.max_priority);
        b.vertex(owner, p);
    }
    let all: Vec<usize> = (0..n).collect();
    for v in 0..n {
        let d = r.random_range(spec.min_degree..=spec.max_degree).min(n);
        let mut pool = all.clone();
        for i in 0..d {
            let j = r.random_range(i..n);
            pool.swap(i, j);
        }
        b.edges(v, &pool[..d]);
    }
    b.build().expect("generated games have no dead ends")
}
