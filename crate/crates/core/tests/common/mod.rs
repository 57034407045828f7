#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use timdof::topology::random_topology;
use timdof::Topology;

pub const DENSITIES: [f64; 3] = [0.2, 0.5, 0.8];

/// 200 seeded random topologies with `2 <= K <= 8`, cycling through the densities.
pub fn random_cases() -> Vec<(Topology, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..200)
        .map(|i| {
            let density = DENSITIES[i % DENSITIES.len()];
            let k = rng.random_range(2..=8);
            (random_topology(k, density, &mut rng).unwrap(), density)
        })
        .collect()
}

/// Largest conflict-free set of (message, transmitter) pairs, by enumerating
/// every such set: each receiver in turn is skipped or given any linked
/// transmitter that keeps the partial set conflict-free.
pub fn brute_force_schedule_size(t: &Topology) -> usize {
    fn compatible(t: &Topology, chosen: &[(usize, usize)], i: usize, j: usize) -> bool {
        chosen
            .iter()
            .all(|&(i2, j2)| j != j2 && !t.has_link(i, j2) && !t.has_link(i2, j))
    }

    fn go(t: &Topology, rx: usize, chosen: &mut Vec<(usize, usize)>, best: &mut usize) {
        if rx > t.k() {
            *best = (*best).max(chosen.len());
            return;
        }
        go(t, rx + 1, chosen, best);
        for j in 1..=t.k() {
            if t.has_link(rx, j) && compatible(t, chosen, rx, j) {
                chosen.push((rx, j));
                go(t, rx + 1, chosen, best);
                chosen.pop();
            }
        }
    }

    let mut best = 0;
    go(t, 1, &mut Vec::new(), &mut best);
    best
}
