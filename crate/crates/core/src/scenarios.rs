//! Ready-made schemes and example networks.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::assignment::MessageAssignment;
use crate::topology::Topology;
use crate::verifier::{linalg, random_precoder, LinearScheme};

const FIGURE3_JSON: &str = include_str!("../data/figure3_topology.json");

/// Illustrative instance of a network where cooperation might pay off:
/// transmitter 1 serves receiver 1 but also reaches receivers 2 and 3;
/// transmitter 2 can reach receiver 2 without touching receiver 3, which is
/// served by transmitter 3. Transmitters 4 and 5 stand in for the two
/// surrounding subnetworks. One concrete choice among many; no bound is
/// claimed for it.
pub fn figure3_illustrative() -> Topology {
    Topology::from_json(FIGURE3_JSON).expect("bundled topology parses")
}

/// Two-slot scheme for [`crate::topology::figure4_example`]: every
/// transmitter sends its own message in slot 1, and transmitters 1 and 2
/// repeat theirs in slot 2 while transmitter 3 stays silent.
pub fn figure4_repetition_scheme() -> LinearScheme {
    let repeat = linalg::real(2, 1, &[1.0, 1.0]);
    let first_only = linalg::real(2, 1, &[1.0, 0.0]);
    LinearScheme::new(
        2,
        vec![1, 1, 1],
        MessageAssignment::identity(3),
        BTreeMap::from([
            ((1, 1), repeat.clone()),
            ((2, 2), repeat),
            ((3, 3), first_only),
        ]),
    )
    .expect("static scheme is valid")
}

/// Cooperative Wyner scheme with `T_i = {i - 1, i}` (just `{1}` for message 1)
/// and random full-rank precoders for every message with `m[i - 1] > 0`.
pub fn cooperative_wyner_scheme<R: Rng + ?Sized>(
    n: usize,
    m: &[usize],
    rng: &mut R,
) -> LinearScheme {
    let k = m.len();
    let sets: Vec<BTreeSet<usize>> = (1..=k)
        .map(|i| {
            if i == 1 {
                BTreeSet::from([1])
            } else {
                BTreeSet::from([i - 1, i])
            }
        })
        .collect();
    let mut precoders = BTreeMap::new();
    for (idx, set) in sets.iter().enumerate() {
        let mi = m[idx];
        if mi == 0 {
            continue;
        }
        for &tx in set {
            precoders.insert((tx, idx + 1), random_precoder(n, mi, rng));
        }
    }
    LinearScheme::new(n, m.to_vec(), MessageAssignment::from_sets(sets), precoders)
        .expect("well-formed cooperative scheme")
}

/// A spread of cooperation-order-2 schemes on Wyner's network with `k`
/// users: the mod-3 active pattern sent cooperatively, every message active
/// over one and two slots, alternating messages, and a few random symbol
/// allocations.
pub fn cooperative_wyner_family<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<LinearScheme> {
    let mut out = Vec::new();
    let mod3: Vec<usize> = (1..=k).map(|i| usize::from(i % 3 != 2)).collect();
    out.push(cooperative_wyner_scheme(1, &mod3, rng));
    out.push(cooperative_wyner_scheme(1, &vec![1; k], rng));
    out.push(cooperative_wyner_scheme(2, &vec![1; k], rng));
    let alternating: Vec<usize> = (1..=k).map(|i| i % 2).collect();
    out.push(cooperative_wyner_scheme(2, &alternating, rng));
    for n in 2..=3 {
        for _ in 0..2 {
            let m: Vec<usize> = (0..k).map(|_| rng.random_range(0..n)).collect();
            out.push(cooperative_wyner_scheme(n, &m, rng));
        }
    }
    out
}
