//! Machine-checkable DoF bounds.
//!
//! A [`DofCertificate`] pairs an exact value with the evidence that justifies
//! it. [`DofCertificate::validate`] re-derives the value from the evidence
//! and the topology alone, independently of how the evidence was found.

use serde::{Deserialize, Serialize};

use crate::bounds::Condition1Certificate;
use crate::dof::Dof;
use crate::error::{Error, Result};
use crate::scheduler::Schedule;
use crate::topology::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Lower bound: an interference-avoidance schedule.
    Schedule,
    /// Upper bound: a receiver set satisfying the disjoint-neighborhood and
    /// covering-matching condition.
    Condition1,
    /// Upper bound: receivers sharing a neighborhood share one DoF.
    IdenticalNeighbors,
    /// Upper bound: K.
    Trivial,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Schedule => "schedule",
            CertificateKind::Condition1 => "condition1",
            CertificateKind::IdenticalNeighbors => "identical-neighbors",
            CertificateKind::Trivial => "trivial",
        }
    }
}

/// Receivers partitioned by identical neighborhoods.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeighborGrouping {
    pub groups: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Schedule(Schedule),
    Condition1(Condition1Certificate),
    IdenticalNeighbors(NeighborGrouping),
    Trivial { k: usize },
}

impl Evidence {
    pub fn kind(&self) -> CertificateKind {
        match self {
            Evidence::Schedule(_) => CertificateKind::Schedule,
            Evidence::Condition1(_) => CertificateKind::Condition1,
            Evidence::IdenticalNeighbors(_) => CertificateKind::IdenticalNeighbors,
            Evidence::Trivial { .. } => CertificateKind::Trivial,
        }
    }

    /// The bound this evidence establishes on `t`.
    fn derive_value(&self, t: &Topology) -> Result<Dof> {
        let reject = |msg: String| Err(Error::CertificateRejected(msg));
        match self {
            Evidence::Schedule(s) => {
                s.validate(t)?;
                Ok(s.dof())
            }
            Evidence::Condition1(c) => {
                c.validate(t).map_err(Error::CertificateRejected)?;
                Ok(c.bound())
            }
            Evidence::IdenticalNeighbors(g) => {
                let mut seen = vec![false; t.k() + 1];
                let mut value = 0;
                for group in &g.groups {
                    let Some(&first) = group.first() else {
                        return reject("empty group".into());
                    };
                    for &rx in group {
                        if rx == 0 || rx > t.k() || std::mem::replace(&mut seen[rx], true) {
                            return reject(format!("receiver {rx} out of range or repeated"));
                        }
                        if t.receiver_neighbors(rx) != t.receiver_neighbors(first) {
                            return reject(format!(
                                "receivers {first} and {rx} have different neighborhoods"
                            ));
                        }
                    }
                    if !t.receiver_neighbors(first).is_empty() {
                        value += 1;
                    }
                }
                if let Some(rx) = (1..=t.k()).find(|&r| !seen[r]) {
                    return reject(format!("receiver {rx} missing from grouping"));
                }
                Ok(Dof::integer(value))
            }
            Evidence::Trivial { k } => {
                if *k != t.k() {
                    return reject(format!("trivial bound for K={k} on a K={} topology", t.k()));
                }
                Ok(Dof::integer(*k as u64))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCertificate", into = "RawCertificate")]
pub struct DofCertificate {
    value: Dof,
    evidence: Evidence,
}

impl DofCertificate {
    /// Wraps evidence with the value it establishes. Panics if the evidence
    /// does not hold on `t`.
    pub(crate) fn from_evidence(t: &Topology, evidence: Evidence) -> Self {
        let value = evidence
            .derive_value(t)
            .unwrap_or_else(|e| panic!("internally built evidence failed: {e}"));
        DofCertificate { value, evidence }
    }

    pub fn trivial(t: &Topology) -> Self {
        DofCertificate {
            value: Dof::integer(t.k() as u64),
            evidence: Evidence::Trivial { k: t.k() },
        }
    }

    pub fn kind(&self) -> CertificateKind {
        self.evidence.kind()
    }

    pub fn value(&self) -> Dof {
        self.value
    }

    pub fn evidence(&self) -> &Evidence {
        &self.evidence
    }

    pub fn is_lower_bound(&self) -> bool {
        self.kind() == CertificateKind::Schedule
    }

    /// Re-checks the evidence against `t` and that it yields the stated value.
    pub fn validate(&self, t: &Topology) -> Result<()> {
        let derived = self.evidence.derive_value(t)?;
        if derived != self.value {
            return Err(Error::CertificateRejected(format!(
                "evidence supports {derived}, certificate claims {}",
                self.value
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    kind: CertificateKind,
    value: Dof,
    evidence: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrivialEvidence {
    k: usize,
}

impl TryFrom<RawCertificate> for DofCertificate {
    type Error = serde_json::Error;

    fn try_from(raw: RawCertificate) -> Result<Self, Self::Error> {
        use serde_json::from_value;
        let evidence = match raw.kind {
            CertificateKind::Schedule => Evidence::Schedule(from_value(raw.evidence)?),
            CertificateKind::Condition1 => Evidence::Condition1(from_value(raw.evidence)?),
            CertificateKind::IdenticalNeighbors => {
                Evidence::IdenticalNeighbors(from_value(raw.evidence)?)
            }
            CertificateKind::Trivial => {
                let TrivialEvidence { k } = from_value(raw.evidence)?;
                Evidence::Trivial { k }
            }
        };
        Ok(DofCertificate {
            value: raw.value,
            evidence,
        })
    }
}

impl From<DofCertificate> for RawCertificate {
    fn from(c: DofCertificate) -> Self {
        let to_value = |v: Result<serde_json::Value, _>| v.expect("evidence serializes");
        let evidence = match &c.evidence {
            Evidence::Schedule(s) => to_value(serde_json::to_value(s)),
            Evidence::Condition1(cc) => to_value(serde_json::to_value(cc)),
            Evidence::IdenticalNeighbors(g) => to_value(serde_json::to_value(g)),
            Evidence::Trivial { k } => to_value(serde_json::to_value(TrivialEvidence { k: *k })),
        };
        RawCertificate {
            kind: c.kind(),
            value: c.value,
            evidence,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{fully_connected, wyner};

    #[test]
    fn kind_names_match_serde() {
        for kind in [
            CertificateKind::Schedule,
            CertificateKind::Condition1,
            CertificateKind::IdenticalNeighbors,
            CertificateKind::Trivial,
        ] {
            assert_eq!(serde_json::to_value(kind).unwrap(), kind.name());
        }
    }

    #[test]
    fn schedule_certificate_json() {
        let t = wyner(3).unwrap();
        let c =
            DofCertificate::from_evidence(&t, Evidence::Schedule(Schedule::new([(1, 1), (3, 2)])));
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "kind": "schedule",
                "value": {"num": 2, "den": 1},
                "evidence": {"pairs": [[1, 1], [3, 2]]}
            })
        );
        let back: DofCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
        assert!(back.validate(&t).is_ok());
    }

    #[test]
    fn tampered_values_are_rejected() {
        let t = fully_connected(3).unwrap();
        let forged: DofCertificate = serde_json::from_value(serde_json::json!({
            "kind": "identical-neighbors",
            "value": {"num": 0, "den": 1},
            "evidence": {"groups": [[1, 2, 3]]}
        }))
        .unwrap();
        assert!(forged.validate(&t).is_err());

        let split_wrongly: DofCertificate = serde_json::from_value(serde_json::json!({
            "kind": "identical-neighbors",
            "value": {"num": 1, "den": 1},
            "evidence": {"groups": [[1, 2, 3]]}
        }))
        .unwrap();
        assert!(split_wrongly.validate(&t).is_ok());
        assert!(split_wrongly.validate(&wyner(3).unwrap()).is_err());

        let trivial = DofCertificate::trivial(&t);
        assert!(trivial.validate(&t).is_ok());
        assert!(trivial.validate(&wyner(4).unwrap()).is_err());
    }

    #[test]
    fn grouping_must_partition() {
        let t = wyner(2).unwrap();
        let missing = Evidence::IdenticalNeighbors(NeighborGrouping {
            groups: vec![vec![1]],
        });
        assert!(missing.derive_value(&t).is_err());
        let repeated = Evidence::IdenticalNeighbors(NeighborGrouping {
            groups: vec![vec![1], vec![1], vec![2]],
        });
        assert!(repeated.derive_value(&t).is_err());
    }
}
