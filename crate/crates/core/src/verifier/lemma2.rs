//! Monte Carlo check that a message decodable at its own receiver in Wyner's
//! network can be rebuilt from the interference it leaves at receivers
//! `i - 1` and `i + 1`.

use serde::{Deserialize, Serialize};

use super::channel::{sample_channel, trial_seed};
use super::decode::footprint;
use super::linalg::{hstack, numerical_rank, CMatrix};
use super::scheme::LinearScheme;
use crate::error::{Error, Result};
use crate::topology::{wyner, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub message: usize,
    pub trials: usize,
    pub seed: u64,
    /// Trials where the desired matrix had full column rank `m_i`.
    pub hypothesis_met: usize,
    pub passed: usize,
    pub failed: usize,
    /// Seeds where the rank inequality failed.
    pub counterexample_seeds: Vec<u64>,
    /// Trials where `rank [A B] < rank (A + B)` for the direct-link pieces.
    pub monotonicity_violations: usize,
}

impl Lemma2Report {
    pub fn hypothesis_not_met(&self) -> usize {
        self.trials - self.hypothesis_met
    }
}

/// For each trial: if `H_{i,i} V_{i,i} + H_{i,i-1} V_{i-1,i}` has rank
/// `m_i`, asserts `rank [I_{i,i-1}  I_{i,i+1}] >= m_i`, where the `I` are
/// message `i`'s footprints at the neighboring receivers.
///
/// Requires a Wyner topology, `3 <= i <= K - 1`, `T_i` within `{i - 1, i}`
/// and `m_i >= 1`.
pub fn check_lemma2(
    t: &Topology,
    s: &LinearScheme,
    i: usize,
    trials: usize,
    seed: u64,
) -> Result<Lemma2Report> {
    let k = t.k();
    let reference = wyner(k)?;
    if !t.links().eq(reference.links()) {
        return Err(Error::Precondition(
            "topology is not Wyner's linear network".into(),
        ));
    }
    s.check_topology(t)?;
    if !(3..k).contains(&i) {
        return Err(Error::Precondition(format!(
            "message index {i} outside 3..={} (both neighbors must exist)",
            k.saturating_sub(1)
        )));
    }
    if let Some(tx) = s
        .assignment()
        .transmit_set(i)
        .iter()
        .find(|&&tx| tx != i && tx != i - 1)
    {
        return Err(Error::Precondition(format!(
            "transmit set of message {i} contains transmitter {tx}, outside {{{}, {i}}}",
            i - 1
        )));
    }
    let mi = s.m(i);
    if mi == 0 {
        return Err(Error::Precondition(format!(
            "message {i} carries no symbols"
        )));
    }

    let n = s.n();
    let zero = CMatrix::zeros(n, mi);
    let mut report = Lemma2Report {
        message: i,
        trials,
        seed,
        hypothesis_met: 0,
        passed: 0,
        failed: 0,
        counterexample_seeds: Vec::new(),
        monotonicity_violations: 0,
    };
    for trial in 0..trials {
        let trial_seed = trial_seed(seed, trial);
        let h = sample_channel(t, n, trial_seed)?;

        // pieces reaching the neighbors through the direct links of i-1 and i
        let scaled = |rx: usize, tx: usize| -> CMatrix {
            match s.precoder(tx, i) {
                Some(v) => {
                    let mut out = v.clone();
                    for (slot, mut row) in out.row_iter_mut().enumerate() {
                        row *= num_complex::Complex64::new(h.coefficient(rx, tx, slot), 0.0);
                    }
                    out
                }
                None => zero.clone(),
            }
        };
        let a = scaled(i - 1, i - 1);
        let b = scaled(i + 1, i);
        if numerical_rank(&hstack(n, &[&a, &b])) < numerical_rank(&(&a + &b)) {
            report.monotonicity_violations += 1;
        }

        let desired = footprint(s, &h, i, i)?;
        if numerical_rank(&desired) != mi {
            continue;
        }
        report.hypothesis_met += 1;
        let left = footprint(s, &h, i, i - 1)?;
        let right = footprint(s, &h, i, i + 1)?;
        if numerical_rank(&hstack(n, &[&left, &right])) >= mi {
            report.passed += 1;
        } else {
            report.failed += 1;
            report.counterexample_seeds.push(trial_seed);
        }
    }
    Ok(report)
}
