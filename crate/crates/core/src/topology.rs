//! Bipartite receiver/transmitter connectivity with per-link coherence times.
//!
//! Indices are 1-based: receivers and transmitters are both numbered `1..=K`.
//! A link `(rx, tx)` means the channel coefficient from transmitter `tx` to
//! receiver `rx` is not identically zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::num::NonZeroUsize;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{parse_json, Error, Result};

/// A directed channel from transmitter `tx` to receiver `rx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub rx: usize,
    pub tx: usize,
}

impl Link {
    pub fn new(rx: usize, tx: usize) -> Self {
        Link { rx, tx }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rx, self.tx)
    }
}

/// How many consecutive slots a link coefficient stays fixed before an
/// independent redraw. Blocks are aligned to slot 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coherence {
    Slots(NonZeroUsize),
    /// One draw for the whole block.
    Constant,
}

impl Coherence {
    pub const UNIT: Coherence = Coherence::Slots(NonZeroUsize::MIN);

    pub fn slots(c: usize) -> Result<Self> {
        NonZeroUsize::new(c)
            .map(Coherence::Slots)
            .ok_or_else(|| Error::InvalidCoherence("coherence time must be positive".into()))
    }

    /// Zero-based block index for zero-based `slot`.
    pub fn block_of(&self, slot: usize) -> usize {
        match self {
            Coherence::Slots(c) => slot / c.get(),
            Coherence::Constant => 0,
        }
    }

    /// Number of independent draws needed to cover `n` slots.
    pub fn blocks_in(&self, n: usize) -> usize {
        match self {
            Coherence::Slots(c) => n.div_ceil(c.get()),
            Coherence::Constant => 1.min(n),
        }
    }
}

impl Default for Coherence {
    fn default() -> Self {
        Coherence::UNIT
    }
}

impl fmt::Display for Coherence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coherence::Slots(c) => write!(f, "{c}"),
            Coherence::Constant => f.write_str("constant"),
        }
    }
}

/// Network topology of `K` transmitter/receiver pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyDoc", into = "TopologyDoc")]
pub struct Topology {
    k: usize,
    coherence: BTreeMap<Link, Coherence>,
    // rx_neighbors[r - 1] = transmitters heard by receiver r
    rx_neighbors: Vec<BTreeSet<usize>>,
    // tx_neighbors[t - 1] = receivers reached by transmitter t
    tx_neighbors: Vec<BTreeSet<usize>>,
}

impl Topology {
    /// Builds a topology with every listed link at unit coherence.
    pub fn new(k: usize, links: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidUserCount { k, min: 1 });
        }
        let mut t = Topology {
            k,
            coherence: BTreeMap::new(),
            rx_neighbors: vec![BTreeSet::new(); k],
            tx_neighbors: vec![BTreeSet::new(); k],
        };
        for (rx, tx) in links {
            t.check_index("receiver", rx)?;
            t.check_index("transmitter", tx)?;
            let link = Link::new(rx, tx);
            if t.coherence.insert(link, Coherence::UNIT).is_some() {
                return Err(Error::DuplicateLink { rx, tx });
            }
            t.rx_neighbors[rx - 1].insert(tx);
            t.tx_neighbors[tx - 1].insert(rx);
        }
        Ok(t)
    }

    /// Sets the coherence time of an existing link.
    pub fn with_coherence(mut self, rx: usize, tx: usize, c: Coherence) -> Result<Self> {
        match self.coherence.get_mut(&Link::new(rx, tx)) {
            Some(slot) => {
                *slot = c;
                Ok(self)
            }
            None => Err(Error::CoherenceWithoutLink { rx, tx }),
        }
    }

    /// Copy of this topology with every link at coherence `c`.
    pub fn with_uniform_coherence(&self, c: Coherence) -> Self {
        let mut t = self.clone();
        t.coherence.values_mut().for_each(|v| *v = c);
        t
    }

    fn check_index(&self, what: &'static str, index: usize) -> Result<()> {
        if (1..=self.k).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                what,
                index,
                k: self.k,
            })
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Links in lexicographic `(rx, tx)` order.
    pub fn links(&self) -> impl Iterator<Item = Link> + '_ {
        self.coherence.keys().copied()
    }

    pub fn link_count(&self) -> usize {
        self.coherence.len()
    }

    pub fn has_link(&self, rx: usize, tx: usize) -> bool {
        self.coherence.contains_key(&Link::new(rx, tx))
    }

    /// Coherence of a present link; `None` for absent links.
    pub fn coherence(&self, rx: usize, tx: usize) -> Option<Coherence> {
        self.coherence.get(&Link::new(rx, tx)).copied()
    }

    /// True when every link shares one coherence time.
    pub fn uniform_coherence(&self) -> bool {
        let mut values = self.coherence.values();
        match values.next() {
            Some(first) => values.all(|c| c == first),
            None => true,
        }
    }

    /// Transmitters heard by receiver `rx`. Empty for out-of-range indices.
    pub fn receiver_neighbors(&self, rx: usize) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        rx.checked_sub(1)
            .and_then(|r| self.rx_neighbors.get(r))
            .unwrap_or(&EMPTY)
    }

    /// Receivers reached by transmitter `tx`. Empty for out-of-range indices.
    pub fn transmitter_neighbors(&self, tx: usize) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        tx.checked_sub(1)
            .and_then(|t| self.tx_neighbors.get(t))
            .unwrap_or(&EMPTY)
    }

    pub fn degree(&self, rx: usize) -> usize {
        self.receiver_neighbors(rx).len()
    }

    /// N(A): every transmitter linked to at least one receiver of `a`.
    pub fn neighbors(&self, a: &ReceiverSet) -> BTreeSet<usize> {
        a.iter()
            .flat_map(|rx| self.receiver_neighbors(rx).iter().copied())
            .collect()
    }

    /// Receivers grouped by equal neighborhoods, groups ordered by smallest member.
    pub fn identical_neighbor_groups(&self) -> Vec<Vec<usize>> {
        let mut by_neighborhood: BTreeMap<&BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
        for rx in 1..=self.k {
            by_neighborhood
                .entry(self.receiver_neighbors(rx))
                .or_default()
                .push(rx);
        }
        let mut groups: Vec<Vec<usize>> = by_neighborhood.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TopologyDoc = parse_json(text)?;
        Topology::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology serializes")
    }
}

/// Wyner's linear asymmetric network: receiver `i` hears transmitters `i` and `i - 1`.
pub fn wyner(k: usize) -> Result<Topology> {
    if k == 0 {
        return Err(Error::InvalidUserCount { k, min: 1 });
    }
    Topology::new(k, wyner_links(k))
}

fn wyner_links(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=k).flat_map(|i| {
        let prev = (i >= 2).then(|| (i, i - 1));
        prev.into_iter().chain(std::iter::once((i, i)))
    })
}

/// Wyner's network closed into a ring by linking transmitter `K` to receiver 1.
pub fn cyclic_wyner(k: usize) -> Result<Topology> {
    if k < 2 {
        return Err(Error::InvalidUserCount { k, min: 2 });
    }
    Topology::new(k, wyner_links(k).chain(std::iter::once((1, k))))
}

pub fn fully_connected(k: usize) -> Result<Topology> {
    if k == 0 {
        return Err(Error::InvalidUserCount { k, min: 1 });
    }
    Topology::new(k, (1..=k).flat_map(|rx| (1..=k).map(move |tx| (rx, tx))))
}

/// Three-user nested network where receiver `i` hears transmitters `1..=i`,
/// with links from transmitters 1 and 2 into receiver 3 held for two slots.
pub fn figure4_example() -> Topology {
    let two = Coherence::slots(2).expect("positive");
    Topology::new(3, [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
        .and_then(|t| t.with_coherence(3, 1, two))
        .and_then(|t| t.with_coherence(3, 2, two))
        .expect("static topology is valid")
}

/// Each of the `K²` possible links present independently with probability `density`.
pub fn random_topology<R: Rng + ?Sized>(k: usize, density: f64, rng: &mut R) -> Result<Topology> {
    if k == 0 {
        return Err(Error::InvalidUserCount { k, min: 1 });
    }
    let mut links = Vec::new();
    for rx in 1..=k {
        for tx in 1..=k {
            if rng.random_bool(density.clamp(0.0, 1.0)) {
                links.push((rx, tx));
            }
        }
    }
    Topology::new(k, links)
}

/// A sorted set of receiver indices within `1..=K`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReceiverSet(BTreeSet<usize>);

impl ReceiverSet {
    pub fn new(k: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > k) {
            return Err(Error::IndexOutOfRange {
                what: "receiver",
                index: bad,
                k,
            });
        }
        Ok(ReceiverSet(members))
    }

    pub fn empty() -> Self {
        ReceiverSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, rx: usize) -> bool {
        self.0.contains(&rx)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn is_within(&self, k: usize) -> bool {
        self.0.iter().all(|&m| (1..=k).contains(&m))
    }

    /// Receivers of `1..=k` outside this set.
    pub fn complement(&self, k: usize) -> Vec<usize> {
        (1..=k).filter(|r| !self.0.contains(r)).collect()
    }
}

// Wire format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyDoc {
    k: usize,
    #[serde(default)]
    links: Vec<[usize; 2]>,
    #[serde(default)]
    coherence: Vec<CoherenceEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoherenceEntry(usize, usize, CoherenceValue);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoherenceValue {
    Slots(usize),
    Named(String),
}

impl TryFrom<CoherenceValue> for Coherence {
    type Error = Error;

    fn try_from(v: CoherenceValue) -> Result<Self> {
        match v {
            CoherenceValue::Slots(c) => Coherence::slots(c),
            CoherenceValue::Named(s) if s == "constant" => Ok(Coherence::Constant),
            CoherenceValue::Named(s) => Err(Error::InvalidCoherence(format!(
                "expected a positive integer or \"constant\", got {s:?}"
            ))),
        }
    }
}

impl TryFrom<TopologyDoc> for Topology {
    type Error = Error;

    fn try_from(doc: TopologyDoc) -> Result<Self> {
        let mut t = Topology::new(doc.k, doc.links.iter().map(|&[rx, tx]| (rx, tx)))?;
        let mut seen = BTreeSet::new();
        for CoherenceEntry(rx, tx, value) in doc.coherence {
            if !seen.insert((rx, tx)) {
                return Err(Error::InvalidCoherence(format!(
                    "duplicate coherence entry for ({rx}, {tx})"
                )));
            }
            t = t.with_coherence(rx, tx, value.try_into()?)?;
        }
        Ok(t)
    }
}

impl From<Topology> for TopologyDoc {
    fn from(t: Topology) -> Self {
        let links = t.links().map(|l| [l.rx, l.tx]).collect();
        let coherence = t
            .coherence
            .iter()
            .filter(|(_, c)| **c != Coherence::UNIT)
            .map(|(l, c)| {
                let value = match c {
                    Coherence::Slots(n) => CoherenceValue::Slots(n.get()),
                    Coherence::Constant => CoherenceValue::Named("constant".into()),
                };
                CoherenceEntry(l.rx, l.tx, value)
            })
            .collect();
        TopologyDoc {
            k: t.k,
            links,
            coherence,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn link_set(t: &Topology) -> Vec<(usize, usize)> {
        t.links().map(|l| (l.rx, l.tx)).collect()
    }

    fn rs(k: usize, m: &[usize]) -> ReceiverSet {
        ReceiverSet::new(k, m.iter().copied()).unwrap()
    }

    #[test]
    fn wyner_three_users() {
        let t = wyner(3).unwrap();
        assert_eq!(link_set(&t), vec![(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]);
        assert!(t
            .links()
            .all(|l| t.coherence(l.rx, l.tx) == Some(Coherence::UNIT)));
    }

    #[test]
    fn wyner_small_cases() {
        assert_eq!(link_set(&wyner(1).unwrap()), vec![(1, 1)]);
        let t = wyner(4).unwrap();
        assert_eq!(t.link_count(), 7);
        assert_eq!(t.receiver_neighbors(4), &BTreeSet::from([3, 4]));
        assert_eq!(t.transmitter_neighbors(4), &BTreeSet::from([4]));
        assert!(matches!(
            wyner(0),
            Err(Error::InvalidUserCount { k: 0, .. })
        ));
    }

    #[test]
    fn cyclic_adds_wraparound() {
        let t = cyclic_wyner(3).unwrap();
        let mut expected = link_set(&wyner(3).unwrap());
        expected.push((1, 3));
        expected.sort();
        assert_eq!(link_set(&t), expected);
        assert_eq!(
            link_set(&cyclic_wyner(2).unwrap()),
            vec![(1, 1), (1, 2), (2, 1), (2, 2)]
        );
        assert_eq!(cyclic_wyner(6).unwrap().link_count(), 12);
        assert!(cyclic_wyner(1).is_err());
    }

    #[test]
    fn fully_connected_neighborhoods() {
        assert_eq!(fully_connected(2).unwrap().link_count(), 4);
        let t = fully_connected(4).unwrap();
        assert_eq!(t.link_count(), 16);
        for rx in 1..=4 {
            assert_eq!(t.receiver_neighbors(rx), &(1..=4).collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn figure4_layout() {
        let t = figure4_example();
        assert_eq!(t.k(), 3);
        assert_eq!(t.link_count(), 6);
        assert_eq!(t.coherence(3, 1), Some(Coherence::slots(2).unwrap()));
        assert_eq!(t.coherence(3, 2), Some(Coherence::slots(2).unwrap()));
        assert_eq!(t.coherence(2, 1), Some(Coherence::UNIT));
        assert_eq!(t.coherence(2, 2), Some(Coherence::UNIT));
        assert_eq!(t.coherence(3, 3), Some(Coherence::UNIT));
        assert_eq!(t.coherence(1, 2), None);
        assert!(!t.uniform_coherence());
    }

    #[test]
    fn neighbor_queries() {
        let t = wyner(3).unwrap();
        assert_eq!(t.neighbors(&rs(3, &[2])), BTreeSet::from([1, 2]));
        assert!(t.neighbors(&ReceiverSet::empty()).is_empty());
        let t6 = wyner(6).unwrap();
        assert_eq!(t6.neighbors(&rs(6, &[2, 5])), BTreeSet::from([1, 2, 4, 5]));
    }

    #[test]
    fn grouping() {
        assert_eq!(
            fully_connected(3).unwrap().identical_neighbor_groups(),
            vec![vec![1, 2, 3]]
        );
        assert_eq!(
            wyner(5).unwrap().identical_neighbor_groups(),
            (1..=5).map(|i| vec![i]).collect::<Vec<_>>()
        );
        let empty = Topology::new(4, []).unwrap();
        assert_eq!(empty.identical_neighbor_groups(), vec![vec![1, 2, 3, 4]]);
        // groups ordered by smallest member, not by neighborhood
        let t = Topology::new(3, [(1, 3), (2, 1), (3, 3)]).unwrap();
        assert_eq!(t.identical_neighbor_groups(), vec![vec![1, 3], vec![2]]);
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            Topology::new(2, [(1, 3)]),
            Err(Error::IndexOutOfRange {
                what: "transmitter",
                index: 3,
                k: 2
            })
        ));
        assert!(matches!(
            Topology::new(2, [(1, 1), (1, 1)]),
            Err(Error::DuplicateLink { rx: 1, tx: 1 })
        ));
        assert!(matches!(
            wyner(2).unwrap().with_coherence(1, 2, Coherence::Constant),
            Err(Error::CoherenceWithoutLink { rx: 1, tx: 2 })
        ));
        assert!(ReceiverSet::new(3, [0]).is_err());
        assert!(ReceiverSet::new(3, [4]).is_err());
    }

    #[test]
    fn json_format() {
        let t = figure4_example();
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["k"], 3);
        assert_eq!(v["links"][0], serde_json::json!([1, 1]));
        assert_eq!(v["coherence"], serde_json::json!([[3, 1, 2], [3, 2, 2]]));

        let parsed = Topology::from_json(
            r#"{"k": 2, "links": [[2,2],[1,1]], "coherence": [[1,1,"constant"]]}"#,
        )
        .unwrap();
        assert_eq!(parsed.coherence(1, 1), Some(Coherence::Constant));
        assert_eq!(parsed.coherence(2, 2), Some(Coherence::UNIT));
        assert_eq!(link_set(&parsed), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn json_errors_name_the_field() {
        let err = Topology::from_json(r#"{"links": []}"#).unwrap_err();
        assert!(err.to_string().contains("`k`"), "{err}");
        let err = Topology::from_json(r#"{"k": 2, "links": [[1, "x"]]}"#).unwrap_err();
        assert!(err.to_string().contains("links[0]"), "{err}");
        let err = Topology::from_json(r#"{"k": 2, "links": [[1,1]], "coherence": [[1,1,"slow"]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidCoherence(_)));
        let err = Topology::from_json(r#"{"k": 2, "links": [[1,1]], "coherence": [[1,1,0]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::InvalidCoherence(_)));
    }

    #[test]
    fn coherence_blocks() {
        let two = Coherence::slots(2).unwrap();
        assert_eq!(
            (0..4).map(|s| two.block_of(s)).collect::<Vec<_>>(),
            [0, 0, 1, 1]
        );
        assert_eq!(two.blocks_in(5), 3);
        assert_eq!(Coherence::Constant.blocks_in(7), 1);
        assert!(Coherence::slots(0).is_err());
    }

    fn arb_topology() -> impl Strategy<Value = Topology> {
        (1usize..=7).prop_flat_map(|k| {
            (
                Just(k),
                proptest::collection::vec(
                    (any::<bool>(), prop_oneof![Just(0usize), 1usize..4]),
                    k * k,
                ),
            )
                .prop_map(|(k, cells)| {
                    let mut links = Vec::new();
                    let mut coh = Vec::new();
                    for (idx, (present, c)) in cells.into_iter().enumerate() {
                        let (rx, tx) = (idx / k + 1, idx % k + 1);
                        if present {
                            links.push((rx, tx));
                            let c = if c == 0 {
                                Coherence::Constant
                            } else {
                                Coherence::slots(c).unwrap()
                            };
                            coh.push((rx, tx, c));
                        }
                    }
                    coh.into_iter()
                        .fold(Topology::new(k, links).unwrap(), |t, (rx, tx, c)| {
                            t.with_coherence(rx, tx, c).unwrap()
                        })
                })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(t in arb_topology()) {
            prop_assert_eq!(Topology::from_json(&t.to_json()).unwrap(), t);
        }

        #[test]
        fn neighbors_monotone_and_bounded(
            t in arb_topology(),
            a_bits in any::<u8>(),
            b_bits in any::<u8>(),
        ) {
            let k = t.k();
            let members = |bits: u8| (1..=k).filter(move |i| bits & (1 << (i - 1)) != 0);
            let a = ReceiverSet::new(k, members(a_bits)).unwrap();
            let b = ReceiverSet::new(k, members(a_bits | b_bits)).unwrap();
            let na = t.neighbors(&a);
            prop_assert!(na.is_subset(&t.neighbors(&b)));

            let degree_sum: usize = a.iter().map(|i| t.degree(i)).sum();
            prop_assert!(na.len() <= degree_sum);
            let disjoint = a.iter().all(|i| a.iter().filter(|&j| j != i).all(|j| {
                t.receiver_neighbors(i).is_disjoint(t.receiver_neighbors(j))
            }));
            prop_assert_eq!(na.len() == degree_sum, disjoint);
        }

        #[test]
        fn family_link_counts(k in 2usize..40) {
            prop_assert_eq!(wyner(k).unwrap().link_count(), 2 * k - 1);
            prop_assert_eq!(cyclic_wyner(k).unwrap().link_count(), 2 * k);
        }
    }
}
