use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::topology::{Link, Topology};

/// One draw of every link's coefficient sequence over `n` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    k: usize,
    n: usize,
    seed: u64,
    coefficients: BTreeMap<Link, Vec<f64>>,
}

impl ChannelRealization {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Coefficient sequence of a present link.
    pub fn sequence(&self, rx: usize, tx: usize) -> Option<&[f64]> {
        self.coefficients.get(&Link::new(rx, tx)).map(Vec::as_slice)
    }

    /// `H_{rx,tx}` at zero-based `slot`; zero for absent links.
    pub fn coefficient(&self, rx: usize, tx: usize, slot: usize) -> f64 {
        self.sequence(rx, tx).map_or(0.0, |s| s[slot])
    }
}

/// Per-trial seed for Monte Carlo runs.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

/// Draws i.i.d. standard normal coefficients, one per coherence block per
/// link, visiting links in lexicographic order. Deterministic in
/// `(t, n, seed)`.
pub fn sample_channel(t: &Topology, n: usize, seed: u64) -> Result<ChannelRealization> {
    if n == 0 {
        return Err(Error::Precondition(
            "block length n must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coefficients = BTreeMap::new();
    for link in t.links() {
        let coherence = t.coherence(link.rx, link.tx).unwrap_or_default();
        let draws: Vec<f64> = (0..coherence.blocks_in(n))
            .map(|_| nonzero_normal(&mut rng))
            .collect();
        let seq = (0..n).map(|slot| draws[coherence.block_of(slot)]).collect();
        coefficients.insert(link, seq);
    }
    Ok(ChannelRealization {
        k: t.k(),
        n,
        seed,
        coefficients,
    })
}

fn nonzero_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.sample(StandardNormal);
        if x != 0.0 {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{figure4_example, wyner, Coherence};

    #[test]
    fn constant_link_is_flat() {
        let t = wyner(2)
            .unwrap()
            .with_coherence(2, 1, Coherence::Constant)
            .unwrap();
        let h = sample_channel(&t, 4, 9).unwrap();
        let s = h.sequence(2, 1).unwrap();
        assert!(s.iter().all(|&x| x == s[0]));
        // unit coherence redraws every slot
        let s = h.sequence(1, 1).unwrap();
        assert!(s.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn coherence_two_blocks() {
        let h = sample_channel(&figure4_example(), 4, 1).unwrap();
        let s = h.sequence(3, 1).unwrap();
        assert_eq!(s[0], s[1]);
        assert_eq!(s[2], s[3]);
        assert_ne!(s[0], s[2]);
    }

    #[test]
    fn deterministic_and_zero_off_links() {
        let t = figure4_example();
        assert_eq!(
            sample_channel(&t, 3, 5).unwrap(),
            sample_channel(&t, 3, 5).unwrap()
        );
        assert_ne!(
            sample_channel(&t, 3, 5).unwrap(),
            sample_channel(&t, 3, 6).unwrap()
        );
        let h = sample_channel(&t, 3, 5).unwrap();
        assert_eq!(h.coefficient(1, 3, 0), 0.0);
        assert!(h.sequence(1, 3).is_none());
        assert!(sample_channel(&t, 0, 0).is_err());
    }

    #[test]
    fn blocks_hold_exactly_across_many_draws() {
        let t = wyner(5)
            .unwrap()
            .with_coherence(3, 2, Coherence::slots(3).unwrap())
            .unwrap()
            .with_coherence(5, 5, Coherence::Constant)
            .unwrap();
        for seed in 0..50 {
            let h = sample_channel(&t, 7, seed).unwrap();
            for link in t.links() {
                let c = t.coherence(link.rx, link.tx).unwrap();
                let s = h.sequence(link.rx, link.tx).unwrap();
                assert!(s.iter().all(|&x| x != 0.0));
                for a in 0..7 {
                    for b in 0..7 {
                        if c.block_of(a) == c.block_of(b) {
                            assert_eq!(s[a].to_bits(), s[b].to_bits());
                        }
                    }
                }
            }
        }
    }
}
