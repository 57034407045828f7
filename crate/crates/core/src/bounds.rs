//! Converse (upper) bounds on the sum DoF.
//!
//! Two families are supported:
//!
//! * **Condition 1.** A receiver set `A` whose members have pairwise
//!   disjoint neighborhoods, such that after deleting the receivers in `A`
//!   and every transmitter outside `N(A)` the remaining bipartite graph has
//!   a matching covering `N(A)`. Then the sum DoF is at most `K - |A|`,
//!   for any cooperation order.
//! * **Identical neighborhoods.** Receivers hearing exactly the same
//!   transmitters share a single DoF between them; receivers hearing no
//!   transmitter get none.
//!
//! Both are under a shared channel distribution across links; topologies
//! with mixed coherence times fall outside that assumption.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certificate::{DofCertificate, Evidence, NeighborGrouping};
use crate::dof::Dof;
use crate::matching::{hall_violator, maximum_matching};
use crate::topology::{ReceiverSet, Topology};

/// Default K up to which the Condition-1 search is exhaustive.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 12;

/// Witness that `t` satisfies Condition 1 with receiver set `receivers`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Condition1Certificate {
    receivers: ReceiverSet,
    /// `(transmitter, receiver)` pairs sorted by transmitter, covering N(A).
    matching: Vec<(usize, usize)>,
    bound: Dof,
}

impl Condition1Certificate {
    pub fn receivers(&self) -> &ReceiverSet {
        &self.receivers
    }

    pub fn matching(&self) -> &[(usize, usize)] {
        &self.matching
    }

    pub fn bound(&self) -> Dof {
        self.bound
    }

    /// Checks every clause of the condition from scratch. Depends on the
    /// topology only: no assignment or cooperation order enters.
    pub fn validate(&self, t: &Topology) -> Result<(), String> {
        let k = t.k();
        if !self.receivers.is_within(k) {
            return Err(format!("receiver set exceeds 1..={k}"));
        }
        let mut owner = BTreeMap::new();
        for rx in self.receivers.iter() {
            for &tx in t.receiver_neighbors(rx) {
                if let Some(prev) = owner.insert(tx, rx) {
                    return Err(format!("receivers {prev} and {rx} share transmitter {tx}"));
                }
            }
        }
        let mut matched_rx = std::collections::BTreeSet::new();
        let mut matched_tx = std::collections::BTreeSet::new();
        for &(tx, rx) in &self.matching {
            if !owner.contains_key(&tx) {
                return Err(format!("transmitter {tx} is not in N(A)"));
            }
            if self.receivers.contains(rx) || rx == 0 || rx > k {
                return Err(format!("receiver {rx} is not in the complement of A"));
            }
            if !t.has_link(rx, tx) {
                return Err(format!("matched pair (tx {tx}, rx {rx}) is not a link"));
            }
            if !matched_tx.insert(tx) || !matched_rx.insert(rx) {
                return Err(format!("pair (tx {tx}, rx {rx}) reuses a vertex"));
            }
        }
        if let Some(tx) = owner.keys().find(|tx| !matched_tx.contains(tx)) {
            return Err(format!("transmitter {tx} of N(A) is unmatched"));
        }
        let expected = Dof::integer((k - self.receivers.len()) as u64);
        if self.bound != expected {
            return Err(format!(
                "bound {} differs from K - |A| = {expected}",
                self.bound
            ));
        }
        Ok(())
    }
}

/// Which clause of Condition 1 a receiver set breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition1Failure {
    OutOfRange {
        receiver: usize,
        k: usize,
    },
    Overlap {
        first: usize,
        second: usize,
        transmitter: usize,
    },
    /// `transmitters` (a subset of N(A)) reach only `receivers` in the
    /// complement of A, and there are fewer of the latter.
    Deficient {
        transmitters: Vec<usize>,
        receivers: Vec<usize>,
    },
}

impl fmt::Display for Condition1Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition1Failure::OutOfRange { receiver, k } => {
                write!(f, "receiver {receiver} out of range 1..={k}")
            }
            Condition1Failure::Overlap {
                first,
                second,
                transmitter,
            } => write!(
                f,
                "neighborhoods of receivers {first} and {second} overlap at transmitter {transmitter}"
            ),
            Condition1Failure::Deficient {
                transmitters,
                receivers,
            } => write!(
                f,
                "no matching covers N(A): transmitters {transmitters:?} reach only receivers {receivers:?}"
            ),
        }
    }
}

impl std::error::Error for Condition1Failure {}

/// Checks Condition 1 for receiver set `a`, producing an explicit covering
/// matching on success.
pub fn check_condition1(
    t: &Topology,
    a: &ReceiverSet,
) -> Result<Condition1Certificate, Condition1Failure> {
    let k = t.k();
    if let Some(receiver) = a.iter().find(|&r| r == 0 || r > k) {
        return Err(Condition1Failure::OutOfRange { receiver, k });
    }
    let mut owner = BTreeMap::new();
    for rx in a.iter() {
        for &tx in t.receiver_neighbors(rx) {
            if let Some(first) = owner.insert(tx, rx) {
                return Err(Condition1Failure::Overlap {
                    first,
                    second: rx,
                    transmitter: tx,
                });
            }
        }
    }

    // reduced graph: N(A) on the left, complement of A on the right
    let left: Vec<usize> = owner.keys().copied().collect();
    let right = a.complement(k);
    let right_index: BTreeMap<usize, usize> = right
        .iter()
        .enumerate()
        .map(|(idx, &rx)| (rx, idx))
        .collect();
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&tx| {
            t.transmitter_neighbors(tx)
                .iter()
                .filter_map(|rx| right_index.get(rx).copied())
                .collect()
        })
        .collect();
    let m = maximum_matching(&adj, right.len());
    if let Some((s, ns)) = hall_violator(&adj, &m) {
        return Err(Condition1Failure::Deficient {
            transmitters: s.into_iter().map(|u| left[u]).collect(),
            receivers: ns.into_iter().map(|v| right[v]).collect(),
        });
    }
    let matching = left
        .iter()
        .zip(&m.left_to_right)
        .map(|(&tx, v)| (tx, right[v.expect("covering matching")]))
        .collect();
    Ok(Condition1Certificate {
        receivers: a.clone(),
        matching,
        bound: Dof::integer((k - a.len()) as u64),
    })
}

fn certify(t: &Topology, members: &[usize]) -> Condition1Certificate {
    let a = ReceiverSet::new(t.k(), members.iter().copied()).expect("indices in range");
    check_condition1(t, &a).expect("search only keeps valid sets")
}

/// Largest valid receiver set by depth-first search in receiver order
/// (include before exclude), keeping the lexicographically first maximum.
///
/// Every clause of Condition 1 is inherited by subsets, so a branch is cut as
/// soon as neighborhoods overlap, `|complement| < |N(A)|`, or the covering
/// matching fails.
pub fn exhaustive_condition1(t: &Topology) -> Condition1Certificate {
    struct Dfs<'a> {
        t: &'a Topology,
        k: usize,
        owned: Vec<bool>,
        covered: usize,
        current: Vec<usize>,
        best: Vec<usize>,
    }

    impl Dfs<'_> {
        fn run(&mut self, rx: usize) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if rx > self.k || self.current.len() + (self.k - rx + 1) <= self.best.len() {
                return;
            }
            let nbrs = self.t.receiver_neighbors(rx);
            let disjoint = nbrs.iter().all(|&tx| !self.owned[tx]);
            let complement = self.k - self.current.len() - 1;
            if disjoint && complement >= self.covered + nbrs.len() {
                self.current.push(rx);
                let a = ReceiverSet::new(self.k, self.current.iter().copied()).expect("in range");
                if check_condition1(self.t, &a).is_ok() {
                    nbrs.iter().for_each(|&tx| self.owned[tx] = true);
                    self.covered += nbrs.len();
                    self.run(rx + 1);
                    self.covered -= nbrs.len();
                    nbrs.iter().for_each(|&tx| self.owned[tx] = false);
                }
                self.current.pop();
            }
            self.run(rx + 1);
        }
    }

    let mut dfs = Dfs {
        t,
        k: t.k(),
        owned: vec![false; t.k() + 1],
        covered: 0,
        current: Vec::new(),
        best: Vec::new(),
    };
    dfs.run(1);
    certify(t, &dfs.best)
}

/// Scans receivers in index order, keeping each one whose addition leaves
/// Condition 1 satisfied.
pub fn greedy_condition1(t: &Topology) -> Condition1Certificate {
    let mut members = Vec::new();
    for rx in 1..=t.k() {
        members.push(rx);
        let a = ReceiverSet::new(t.k(), members.iter().copied()).expect("in range");
        if check_condition1(t, &a).is_err() {
            members.pop();
        }
    }
    certify(t, &members)
}

/// Tightest Condition-1 bound found: exhaustive search when
/// `K <= exhaustive_limit`, greedy otherwise. Falls back to the trivial
/// bound `K` when only the empty set qualifies.
pub fn best_condition1_bound(t: &Topology, exhaustive_limit: usize) -> DofCertificate {
    let cert = if t.k() <= exhaustive_limit {
        exhaustive_condition1(t)
    } else {
        greedy_condition1(t)
    };
    let out = if cert.receivers().is_empty() {
        DofCertificate::trivial(t)
    } else {
        DofCertificate::from_evidence(t, Evidence::Condition1(cert))
    };
    debug_assert!(out.validate(t).is_ok());
    out
}

/// Number of distinct nonempty receiver neighborhoods.
pub fn identical_neighbors_bound(t: &Topology) -> DofCertificate {
    let grouping = NeighborGrouping {
        groups: t.identical_neighbor_groups(),
    };
    DofCertificate::from_evidence(t, Evidence::IdenticalNeighbors(grouping))
}

/// The smallest of the Condition-1, identical-neighborhood and trivial
/// bounds; ties prefer them in that order.
pub fn upper_bound(t: &Topology, exhaustive_limit: usize) -> DofCertificate {
    let candidates = [
        best_condition1_bound(t, exhaustive_limit),
        identical_neighbors_bound(t),
        DofCertificate::trivial(t),
    ];
    let mut best = None::<DofCertificate>;
    for c in candidates {
        if best.as_ref().is_none_or(|b| c.value() < b.value()) {
            best = Some(c);
        }
    }
    best.expect("nonempty candidates")
}
