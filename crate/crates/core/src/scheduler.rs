//! One-shot interference-avoidance schedules.
//!
//! A schedule activates pairs `(i, j)`: message `i` is sent from transmitter
//! `j` over the link `(i, j)`, and no other active transmitter reaches
//! receiver `i`. Its size is an achievable sum DoF.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::assignment::MessageAssignment;
use crate::certificate::{DofCertificate, Evidence};
use crate::dof::Dof;
use crate::error::{Error, Result};
use crate::topology::Topology;
use crate::verifier::{linalg, LinearScheme};

/// Above this K, [`schedule_exact`] refuses to run.
pub const EXACT_SEARCH_LIMIT: usize = 12;

/// Active `(message, serving transmitter)` pairs, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pairs: Vec<(usize, usize)>,
}

impl Schedule {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        Schedule { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dof(&self) -> Dof {
        Dof::integer(self.pairs.len() as u64)
    }

    /// Checks links, distinctness and conflict-freeness against `t`.
    pub fn validate(&self, t: &Topology) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSchedule(msg));
        let mut messages = BTreeSet::new();
        let mut transmitters = BTreeSet::new();
        for &(i, j) in &self.pairs {
            if !t.has_link(i, j) {
                return bad(format!("pair ({i}, {j}) uses an absent link"));
            }
            if !messages.insert(i) {
                return bad(format!("message {i} scheduled twice"));
            }
            if !transmitters.insert(j) {
                return bad(format!("transmitter {j} serves two messages"));
            }
        }
        for &(i, j) in &self.pairs {
            for &(i2, j2) in &self.pairs {
                if i != i2 && t.has_link(i, j2) {
                    return bad(format!(
                        "transmitter {j2} (serving {i2}) interferes at receiver {i} (served by {j})"
                    ));
                }
            }
        }
        Ok(())
    }
}

struct Search<'a> {
    t: &'a Topology,
    k: usize,
    // receivers reached by currently active transmitters, with multiplicity
    blocked: Vec<usize>,
    tx_used: Vec<bool>,
    rx_active: Vec<bool>,
    current: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn feasible(&self, rx: usize, tx: usize) -> bool {
        !self.tx_used[tx]
            && self.blocked[rx] == 0
            && self
                .t
                .transmitter_neighbors(tx)
                .iter()
                .all(|&r| !self.rx_active[r])
    }

    fn push(&mut self, rx: usize, tx: usize) {
        self.tx_used[tx] = true;
        self.rx_active[rx] = true;
        for &r in self.t.transmitter_neighbors(tx) {
            self.blocked[r] += 1;
        }
        self.current.push((rx, tx));
    }

    fn pop(&mut self) {
        let (rx, tx) = self.current.pop().expect("nonempty");
        self.tx_used[tx] = false;
        self.rx_active[rx] = false;
        for &r in self.t.transmitter_neighbors(tx) {
            self.blocked[r] -= 1;
        }
    }

    // receivers from `rx` on that could still be served, capped by free transmitters
    fn optimistic_remaining(&self, rx: usize) -> usize {
        let open = (rx..=self.k)
            .filter(|&r| {
                self.blocked[r] == 0
                    && self
                        .t
                        .receiver_neighbors(r)
                        .iter()
                        .any(|&j| !self.tx_used[j])
            })
            .count();
        let free = self.tx_used[1..].iter().filter(|u| !**u).count();
        open.min(free)
    }

    // Depth-first over receivers in index order; serving transmitters are
    // tried in increasing order before skipping the receiver, so complete
    // schedules are met in lexicographic order and the first maximum is kept.
    fn run(&mut self, rx: usize) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if rx > self.k || self.current.len() + self.optimistic_remaining(rx) <= self.best.len() {
            return;
        }
        let candidates: Vec<usize> = self.t.receiver_neighbors(rx).iter().copied().collect();
        for tx in candidates {
            if self.feasible(rx, tx) {
                self.push(rx, tx);
                self.run(rx + 1);
                self.pop();
            }
        }
        self.run(rx + 1);
    }
}

/// Maximum conflict-free schedule by branch and bound; ties go to the
/// lexicographically smallest pair list. Refuses `K > 12`.
pub fn schedule_exact(t: &Topology) -> Result<Schedule> {
    if t.k() > EXACT_SEARCH_LIMIT {
        return Err(Error::SizeGuard {
            k: t.k(),
            limit: EXACT_SEARCH_LIMIT,
        });
    }
    Ok(schedule_exact_unguarded(t))
}

/// [`schedule_exact`] without the size guard. Exponential in K.
pub fn schedule_exact_unguarded(t: &Topology) -> Schedule {
    let k = t.k();
    let mut search = Search {
        t,
        k,
        blocked: vec![0; k + 2],
        tx_used: vec![false; k + 1],
        rx_active: vec![false; k + 1],
        current: Vec::new(),
        best: Vec::new(),
    };
    search.run(1);
    Schedule::new(search.best)
}

/// Scans receivers in increasing order and serves each with the lowest
/// transmitter that keeps the schedule conflict-free.
pub fn schedule_greedy(t: &Topology) -> Schedule {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for rx in 1..=t.k() {
        let interfered = pairs.iter().any(|&(_, j)| t.has_link(rx, j));
        if interfered {
            continue;
        }
        let pick = t.receiver_neighbors(rx).iter().copied().find(|&tx| {
            pairs
                .iter()
                .all(|&(i2, j2)| j2 != tx && !t.has_link(i2, tx))
        });
        if let Some(tx) = pick {
            pairs.push((rx, tx));
        }
    }
    Schedule::new(pairs)
}

/// The one-slot linear scheme realizing a schedule: each scheduled message
/// sends one symbol from its serving transmitter with unit precoder.
pub fn schedule_to_scheme(s: &Schedule, t: &Topology) -> Result<LinearScheme> {
    s.validate(t)?;
    let k = t.k();
    let mut sets = vec![BTreeSet::new(); k];
    let mut m = vec![0; k];
    let mut precoders = BTreeMap::new();
    for &(i, j) in s.pairs() {
        sets[i - 1].insert(j);
        m[i - 1] = 1;
        precoders.insert((j, i), linalg::real(1, 1, &[1.0]));
    }
    LinearScheme::new(1, m, MessageAssignment::from_sets(sets), precoders)
}

/// Achievable sum DoF certified by a schedule: exact search for `K <= 12`,
/// greedy above.
pub fn achievable_dof(t: &Topology) -> Result<DofCertificate> {
    achievable_dof_with_limit(t, EXACT_SEARCH_LIMIT)
}

/// Like [`achievable_dof`] with a caller-chosen exact-search threshold.
pub fn achievable_dof_with_limit(t: &Topology, exact_limit: usize) -> Result<DofCertificate> {
    let schedule = if t.k() <= exact_limit {
        schedule_exact_unguarded(t)
    } else {
        schedule_greedy(t)
    };
    schedule_certificate(t, schedule)
}

/// Lower-bound certificate for a caller-supplied schedule.
pub fn schedule_certificate(t: &Topology, schedule: Schedule) -> Result<DofCertificate> {
    schedule.validate(t)?;
    Ok(DofCertificate::from_evidence(
        t,
        Evidence::Schedule(schedule),
    ))
}
