use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::linalg::{numerical_rank, CMatrix};
use crate::assignment::MessageAssignment;
use crate::error::{parse_json, Error, Result};
use crate::topology::Topology;

/// A linear scheme over `n` slots: message `i` carries `m_i` symbols and is
/// sent from each transmitter `j` in its transmit set through an `n x m_i`
/// precoder `V_{j,i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SchemeDoc", into = "SchemeDoc")]
pub struct LinearScheme {
    n: usize,
    m: Vec<usize>,
    assignment: MessageAssignment,
    // keyed by (transmitter, message)
    precoders: BTreeMap<(usize, usize), CMatrix>,
}

impl LinearScheme {
    pub fn new(
        n: usize,
        m: Vec<usize>,
        assignment: MessageAssignment,
        precoders: BTreeMap<(usize, usize), CMatrix>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidScheme(
                "block length n must be positive".into(),
            ));
        }
        if m.len() != assignment.k() {
            return Err(Error::DimensionMismatch(format!(
                "{} symbol counts for {} transmit sets",
                m.len(),
                assignment.k()
            )));
        }
        let assignment = MessageAssignment::new(assignment.transmit_sets().to_vec())?;
        let mut expected = BTreeSet::new();
        for (idx, &mi) in m.iter().enumerate() {
            let msg = idx + 1;
            let set = assignment.transmit_set(msg);
            if mi > 0 && set.is_empty() {
                return Err(Error::InvalidScheme(format!(
                    "message {msg} has m = {mi} but an empty transmit set"
                )));
            }
            if mi > 0 {
                expected.extend(set.iter().map(|&tx| (tx, msg)));
            }
        }
        for (&(tx, msg), v) in &precoders {
            if !expected.contains(&(tx, msg)) {
                return Err(Error::InvalidScheme(format!(
                    "precoder (tx {tx}, msg {msg}) given but tx {tx} does not carry an active message {msg}"
                )));
            }
            let want = (n, m[msg - 1]);
            if v.shape() != want {
                return Err(Error::DimensionMismatch(format!(
                    "precoder (tx {tx}, msg {msg}): expected {}x{} matrix, got {}x{}",
                    want.0,
                    want.1,
                    v.nrows(),
                    v.ncols()
                )));
            }
        }
        if let Some((tx, msg)) = expected.iter().find(|key| !precoders.contains_key(key)) {
            return Err(Error::InvalidScheme(format!(
                "missing precoder (tx {tx}, msg {msg})"
            )));
        }
        Ok(LinearScheme {
            n,
            m,
            assignment,
            precoders,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    /// Symbols carried by message `i` (1-based).
    pub fn m(&self, i: usize) -> usize {
        self.m[i - 1]
    }

    pub fn symbol_counts(&self) -> &[usize] {
        &self.m
    }

    pub fn assignment(&self) -> &MessageAssignment {
        &self.assignment
    }

    pub fn precoder(&self, tx: usize, msg: usize) -> Option<&CMatrix> {
        self.precoders.get(&(tx, msg))
    }

    pub fn precoders(&self) -> impl Iterator<Item = ((usize, usize), &CMatrix)> {
        self.precoders.iter().map(|(k, v)| (*k, v))
    }

    /// Rank of `V_{tx,msg}`, i.e. how many symbols that transmitter spreads.
    pub fn precoder_rank(&self, tx: usize, msg: usize) -> usize {
        self.precoder(tx, msg).map(numerical_rank).unwrap_or(0)
    }

    pub fn check_topology(&self, t: &Topology) -> Result<()> {
        if self.k() != t.k() {
            return Err(Error::DimensionMismatch(format!(
                "scheme has {} messages but topology has K={}",
                self.k(),
                t.k()
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SchemeDoc = parse_json(text)?;
        LinearScheme::try_from(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }
}

/// `n x m` precoder with i.i.d. standard normal real entries, redrawn until
/// its rank is `min(n, m)`.
pub fn random_precoder<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> CMatrix {
    loop {
        let v = CMatrix::from_fn(n, m, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0));
        if numerical_rank(&v) == n.min(m) {
            return v;
        }
    }
}

// Wire format

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDoc {
    n: usize,
    m: Vec<usize>,
    transmit_sets: Vec<Vec<usize>>,
    #[serde(default)]
    precoders: Vec<PrecoderDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrecoderDoc {
    tx: usize,
    msg: usize,
    matrix: Vec<Vec<Entry>>,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl TryFrom<SchemeDoc> for LinearScheme {
    type Error = Error;

    fn try_from(doc: SchemeDoc) -> Result<Self> {
        if doc.transmit_sets.len() != doc.m.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries in m but {} transmit sets",
                doc.m.len(),
                doc.transmit_sets.len()
            )));
        }
        let assignment = MessageAssignment::new(
            doc.transmit_sets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        )?;
        let mut precoders = BTreeMap::new();
        for p in doc.precoders {
            if p.msg == 0 || p.msg > doc.m.len() {
                return Err(Error::IndexOutOfRange {
                    what: "message",
                    index: p.msg,
                    k: doc.m.len(),
                });
            }
            let rows = p.matrix.len();
            let cols = p.matrix.first().map_or(0, Vec::len);
            if let Some(r) = p.matrix.iter().position(|row| row.len() != cols) {
                return Err(Error::DimensionMismatch(format!(
                    "precoder (tx {}, msg {}): row {} has {} entries, expected {cols}",
                    p.tx,
                    p.msg,
                    r + 1,
                    p.matrix[r].len()
                )));
            }
            // an n x 0 matrix cannot be written row-major; such precoders are never required
            let v = CMatrix::from_row_iterator(
                rows,
                cols,
                p.matrix.iter().flatten().map(|&e| Complex64::from(e)),
            );
            if precoders.insert((p.tx, p.msg), v).is_some() {
                return Err(Error::InvalidScheme(format!(
                    "duplicate precoder (tx {}, msg {})",
                    p.tx, p.msg
                )));
            }
        }
        LinearScheme::new(doc.n, doc.m, assignment, precoders)
    }
}

impl From<LinearScheme> for SchemeDoc {
    fn from(s: LinearScheme) -> Self {
        let precoders = s
            .precoders
            .iter()
            .map(|(&(tx, msg), v)| PrecoderDoc {
                tx,
                msg,
                matrix: v
                    .row_iter()
                    .map(|row| {
                        row.iter()
                            .map(|z| {
                                if z.im == 0.0 {
                                    Entry::Real(z.re)
                                } else {
                                    Entry::Complex([z.re, z.im])
                                }
                            })
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        SchemeDoc {
            n: s.n,
            transmit_sets: s
                .assignment
                .transmit_sets()
                .iter()
                .map(|set| set.iter().copied().collect())
                .collect(),
            m: s.m,
            precoders,
        }
    }
}
