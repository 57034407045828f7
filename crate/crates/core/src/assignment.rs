//! Transmit sets: which transmitters carry each message.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};
use crate::topology::Topology;

/// Entry `i - 1` is the transmit set of message `i`; an empty set means the
/// message is not transmitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AssignmentDoc", into = "AssignmentDoc")]
pub struct MessageAssignment {
    transmit_sets: Vec<BTreeSet<usize>>,
}

impl MessageAssignment {
    /// Builds an assignment, rejecting transmitter indices outside `1..=K`.
    pub fn new(transmit_sets: Vec<BTreeSet<usize>>) -> Result<Self> {
        let a = Self::from_sets(transmit_sets);
        if a.k() == 0 {
            return Err(Error::InvalidUserCount { k: 0, min: 1 });
        }
        match a.out_of_range() {
            Some(Violation::OutOfRange { transmitter, k, .. }) => Err(Error::IndexOutOfRange {
                what: "transmitter",
                index: transmitter,
                k,
            }),
            _ => Ok(a),
        }
    }

    /// Unchecked construction; use [`validate`] to report range problems.
    pub fn from_sets(transmit_sets: Vec<BTreeSet<usize>>) -> Self {
        MessageAssignment { transmit_sets }
    }

    /// Every message on its own transmitter.
    pub fn identity(k: usize) -> Self {
        Self::from_sets((1..=k).map(|i| BTreeSet::from([i])).collect())
    }

    pub fn k(&self) -> usize {
        self.transmit_sets.len()
    }

    /// Transmit set of message `i` (1-based).
    pub fn transmit_set(&self, i: usize) -> &BTreeSet<usize> {
        &self.transmit_sets[i - 1]
    }

    pub fn transmit_sets(&self) -> &[BTreeSet<usize>] {
        &self.transmit_sets
    }

    /// Largest transmit set size; 0 when nothing is transmitted.
    pub fn cooperation_order(&self) -> usize {
        self.transmit_sets
            .iter()
            .map(BTreeSet::len)
            .max()
            .unwrap_or(0)
    }

    fn out_of_range(&self) -> Option<Violation> {
        let k = self.k();
        self.transmit_sets
            .iter()
            .enumerate()
            .find_map(|(idx, set)| {
                set.iter()
                    .find(|&&j| j == 0 || j > k)
                    .map(|&j| Violation::OutOfRange {
                        message: idx + 1,
                        transmitter: j,
                        k,
                    })
            })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AssignmentDoc = parse_json(text)?;
        MessageAssignment::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("assignment serializes")
    }
}

/// Interference-avoidance assignment for Wyner's network: messages with
/// `i mod 3 = 1` go out on transmitter `i`, those with `i mod 3 = 0` on
/// transmitter `i - 1`, and the rest are silent.
pub fn mod3_assignment(k: usize) -> Result<MessageAssignment> {
    if k == 0 {
        return Err(Error::InvalidUserCount { k, min: 1 });
    }
    let sets = (1..=k)
        .map(|i| match i % 3 {
            1 => BTreeSet::from([i]),
            0 => BTreeSet::from([i - 1]),
            _ => BTreeSet::new(),
        })
        .collect();
    Ok(MessageAssignment::from_sets(sets))
}

/// Why an assignment was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UserCountMismatch {
        assignment: usize,
        topology: usize,
    },
    OutOfRange {
        message: usize,
        transmitter: usize,
        k: usize,
    },
    CooperationOrder {
        message: usize,
        size: usize,
        limit: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UserCountMismatch {
                assignment,
                topology,
            } => write!(
                f,
                "assignment has {assignment} messages but topology has K={topology}"
            ),
            Violation::OutOfRange {
                message,
                transmitter,
                k,
            } => write!(
                f,
                "message {message}: transmitter {transmitter} out of range 1..={k}"
            ),
            Violation::CooperationOrder {
                message,
                size,
                limit,
            } => write!(
                f,
                "message {message}: transmit set of size {size} exceeds cooperation limit {limit}"
            ),
        }
    }
}

impl std::error::Error for Violation {}

/// Checks ranges and the cooperation constraint `max |T_i| <= n_max`.
/// Reports the first violating message in index order.
pub fn validate(a: &MessageAssignment, t: &Topology, n_max: usize) -> Result<(), Violation> {
    if a.k() != t.k() {
        return Err(Violation::UserCountMismatch {
            assignment: a.k(),
            topology: t.k(),
        });
    }
    for (idx, set) in a.transmit_sets.iter().enumerate() {
        let message = idx + 1;
        if let Some(&j) = set.iter().find(|&&j| j == 0 || j > a.k()) {
            return Err(Violation::OutOfRange {
                message,
                transmitter: j,
                k: a.k(),
            });
        }
        if set.len() > n_max {
            return Err(Violation::CooperationOrder {
                message,
                size: set.len(),
                limit: n_max,
            });
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AssignmentDoc {
    k: usize,
    transmit_sets: Vec<Vec<usize>>,
}

impl TryFrom<AssignmentDoc> for MessageAssignment {
    type Error = Error;

    fn try_from(doc: AssignmentDoc) -> Result<Self> {
        if doc.transmit_sets.len() != doc.k {
            return Err(Error::DimensionMismatch(format!(
                "k = {} but {} transmit sets given",
                doc.k,
                doc.transmit_sets.len()
            )));
        }
        MessageAssignment::new(
            doc.transmit_sets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        )
    }
}

impl From<MessageAssignment> for AssignmentDoc {
    fn from(a: MessageAssignment) -> Self {
        AssignmentDoc {
            k: a.k(),
            transmit_sets: a
                .transmit_sets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        }
    }
}
