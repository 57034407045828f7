use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::upper_bound;
use crate::certificate::DofCertificate;
use crate::dof::Dof;
use crate::error::Result;
use crate::scheduler::achievable_dof;
use crate::topology::Topology;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub k: usize,
    pub links: usize,
    pub uniform_coherence: bool,
}

/// Lower and upper sum-DoF bounds for one topology, with certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: String,
    pub seed: u64,
    pub exhaustive_limit: usize,
    pub topology: TopologySummary,
    pub lower: DofCertificate,
    pub upper: DofCertificate,
    pub tight: bool,
    /// Lower bound divided by K.
    pub per_user: Dof,
    pub per_user_upper: Dof,
}

pub fn analyze(t: &Topology, exhaustive_limit: usize, seed: u64) -> Result<AnalysisReport> {
    let lower = achievable_dof(t)?;
    let upper = upper_bound(t, exhaustive_limit);
    upper.validate(t)?;
    let k = t.k();
    Ok(AnalysisReport {
        version: VERSION.to_string(),
        seed,
        exhaustive_limit,
        topology: TopologySummary {
            k,
            links: t.link_count(),
            uniform_coherence: t.uniform_coherence(),
        },
        tight: lower.value() == upper.value(),
        per_user: lower.value().per_user(k),
        per_user_upper: upper.value().per_user(k),
        lower,
        upper,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "K = {}, {} links{}",
            self.topology.k,
            self.topology.links,
            if self.topology.uniform_coherence {
                ""
            } else {
                " (mixed coherence: converse bounds assume identical channel statistics)"
            }
        )?;
        writeln!(
            f,
            "lower bound: {} ({})",
            self.lower.value(),
            self.lower.kind().name()
        )?;
        writeln!(
            f,
            "upper bound: {} ({})",
            self.upper.value(),
            self.upper.kind().name()
        )?;
        write!(
            f,
            "tight: {}, per-user DoF: {}",
            if self.tight { "yes" } else { "no" },
            if self.tight {
                self.per_user.to_string()
            } else {
                format!("[{}, {}]", self.per_user, self.per_user_upper)
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{fully_connected, wyner};

    #[test]
    fn analysis_examples() {
        let r = analyze(&wyner(6).unwrap(), 12, 0).unwrap();
        assert_eq!(
            (r.lower.value(), r.upper.value()),
            (Dof::integer(4), Dof::integer(4))
        );
        assert!(r.tight);
        assert_eq!(r.per_user, Dof::new(2, 3));

        let r = analyze(&fully_connected(4).unwrap(), 12, 0).unwrap();
        assert_eq!(
            (r.lower.value(), r.upper.value()),
            (Dof::integer(1), Dof::integer(1))
        );
        assert!(r.tight);

        let r = analyze(&wyner(1).unwrap(), 12, 0).unwrap();
        assert!(r.tight);
        assert_eq!(r.per_user, Dof::integer(1));
        assert!(r.to_string().contains("tight: yes"));
    }

    #[test]
    fn report_round_trips() {
        let r = analyze(&wyner(9).unwrap(), 12, 7).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
