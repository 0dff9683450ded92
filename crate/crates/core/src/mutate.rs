//! Seeded mutations turning parity games into Odd-fair benchmark instances.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`,
//! using a separate stream per purpose: stream 0 picks the live vertices,
//! stream 1 draws priorities, and stream `2 + v` picks the live edges of
//! vertex `v`. Picks are partial Fisher–Yates shuffles, so a larger
//! percentage with the same seed extends the smaller one.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{OddFairGame, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MutationSpec {
    /// Liveness percentage in `0..=100`.
    pub liveness: u32,
    pub seed: u64,
    /// Redraw every priority from `1..=p` first.
    pub priorities: Option<u32>,
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// First `k` entries of a seeded shuffle of `items`.
fn pick<T: Copy>(items: &[T], k: usize, r: &mut ChaCha8Rng) -> Vec<T> {
    let mut v = items.to_vec();
    let k = k.min(v.len());
    for i in 0..k {
        let j = r.random_range(i..v.len());
        v.swap(i, j);
    }
    v.truncate(k);
    v
}

fn share(percent: u32, of: usize) -> usize {
    percent as usize * of / 100
}

/// Replaces the live edges: `⌊α/100·|V_Odd|⌋` Odd vertices each get
/// `max(1, ⌊α/100·d⌋)` of their `d` edges marked live.
pub fn mutate_liveness(g: &OddFairGame, percent: u32, seed: u64) -> OddFairGame {
    assert!(percent <= 100, "liveness percentage above 100");
    let odd: Vec<usize> = (0..g.len()).filter(|&v| g.owner(v) == Player::Odd).collect();
    let chosen = pick(&odd, share(percent, odd.len()), &mut rng(seed, 0));
    let mut live = Vec::new();
    for v in chosen {
        let succ = g.successors(v);
        let m = share(percent, succ.len()).max(1);
        for w in pick(succ, m, &mut rng(seed, 2 + v as u64)) {
            live.push((v, w));
        }
    }
    g.with_live(live).expect("live edges drawn from Odd successors")
}

/// Redraws every priority uniformly from `1..=p`.
pub fn mutate_priorities(g: &OddFairGame, p: u32, seed: u64) -> OddFairGame {
    assert!(p >= 1, "priority range must be non-empty");
    let mut r = rng(seed, 1);
    let pr: Vec<u32> = (0..g.len()).map(|_| r.random_range(1..=p)).collect();
    g.with_priorities(&pr)
}

pub fn apply_mutation(g: &OddFairGame, spec: &MutationSpec) -> OddFairGame {
    let base = match spec.priorities {
        Some(p) => mutate_priorities(g, p, spec.seed),
        None => g.clone(),
    };
    mutate_liveness(&base, spec.liveness, spec.seed)
}
