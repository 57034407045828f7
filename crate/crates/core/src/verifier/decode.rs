use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::channel::{sample_channel, trial_seed, ChannelRealization};
use super::linalg::{hstack, numerical_rank, CMatrix};
use super::scheme::LinearScheme;
use crate::dof::Dof;
use crate::error::{Error, Result};
use crate::topology::Topology;

fn check_dims(s: &LinearScheme, h: &ChannelRealization) -> Result<()> {
    if s.k() != h.k() {
        return Err(Error::DimensionMismatch(format!(
            "scheme has {} messages, channel has K={}",
            s.k(),
            h.k()
        )));
    }
    if s.n() != h.n() {
        return Err(Error::DimensionMismatch(format!(
            "scheme spans n={} slots, channel realization n={}",
            s.n(),
            h.n()
        )));
    }
    Ok(())
}

/// Contribution of message `msg` at receiver `rx` over the block: the
/// `n x m_msg` matrix `sum_j diag(H_{rx,j}) V_{j,msg}` over transmitters `j`
/// carrying the message. Zero when none of them reaches `rx`.
pub fn footprint(
    s: &LinearScheme,
    h: &ChannelRealization,
    msg: usize,
    rx: usize,
) -> Result<CMatrix> {
    check_dims(s, h)?;
    for (what, index) in [("message", msg), ("receiver", rx)] {
        if index == 0 || index > s.k() {
            return Err(Error::IndexOutOfRange {
                what,
                index,
                k: s.k(),
            });
        }
    }
    let n = s.n();
    let mut out = CMatrix::zeros(n, s.m(msg));
    if s.m(msg) == 0 {
        return Ok(out);
    }
    for &tx in s.assignment().transmit_set(msg) {
        let (Some(gains), Some(v)) = (h.sequence(rx, tx), s.precoder(tx, msg)) else {
            continue;
        };
        for (slot, &g) in gains.iter().enumerate() {
            let mut row = out.row_mut(slot);
            row += v.row(slot) * Complex64::new(g, 0.0);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReceiverStatus {
    /// Message carries no symbols.
    Inactive,
    Decodable,
    Undecodable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decodability {
    pub statuses: Vec<ReceiverStatus>,
    pub dof: Dof,
}

impl Decodability {
    pub fn all_active_decodable(&self) -> bool {
        !self.statuses.contains(&ReceiverStatus::Undecodable)
    }
}

/// Zero-forcing test per receiver: with `D` the desired footprint and `J`
/// every other active message's footprint stacked side by side, receiver `i`
/// decodes iff `rank D = m_i` and `rank [D | J] = m_i + rank J`.
pub fn zf_decodability(
    t: &Topology,
    s: &LinearScheme,
    h: &ChannelRealization,
) -> Result<Decodability> {
    s.check_topology(t)?;
    check_dims(s, h)?;
    let k = s.k();
    let n = s.n();
    let mut statuses = Vec::with_capacity(k);
    let mut decoded = 0u64;
    for rx in 1..=k {
        let mi = s.m(rx);
        if mi == 0 {
            statuses.push(ReceiverStatus::Inactive);
            continue;
        }
        let desired = footprint(s, h, rx, rx)?;
        let interference = (1..=k)
            .filter(|&other| other != rx && s.m(other) > 0)
            .map(|other| footprint(s, h, other, rx))
            .collect::<Result<Vec<_>>>()?;
        let interference = hstack(n, &interference.iter().collect::<Vec<_>>());
        let ok = numerical_rank(&desired) == mi
            && numerical_rank(&hstack(n, &[&desired, &interference]))
                == mi + numerical_rank(&interference);
        if ok {
            decoded += mi as u64;
            statuses.push(ReceiverStatus::Decodable);
        } else {
            statuses.push(ReceiverStatus::Undecodable);
        }
    }
    Ok(Decodability {
        statuses,
        dof: Dof::new(decoded, n as u64),
    })
}

/// Outcome of repeated zero-forcing checks over independent channel draws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofVerdict {
    pub trials: usize,
    pub seed: u64,
    /// All trials produced the same per-receiver outcome.
    pub generic: bool,
    /// Most frequent outcome (earliest on ties).
    pub statuses: Vec<ReceiverStatus>,
    pub dof: Dof,
    pub min_dof: Dof,
    pub max_dof: Dof,
    /// Every active receiver decoded in every trial.
    pub fully_decodable: bool,
    /// Seeds whose outcome differs from the reported one.
    pub dissenting_seeds: Vec<u64>,
}

/// Runs [`zf_decodability`] over `trials` realizations drawn with seeds
/// `seed, seed + 1, ...`.
pub fn monte_carlo_dof(
    t: &Topology,
    s: &LinearScheme,
    trials: usize,
    seed: u64,
) -> Result<DofVerdict> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    s.check_topology(t)?;
    let outcomes = (0..trials)
        .map(|trial| {
            let h = sample_channel(t, s.n(), trial_seed(seed, trial))?;
            zf_decodability(t, s, &h)
        })
        .collect::<Result<Vec<_>>>()?;

    // (outcome, count) in first-seen order
    let mut tally: Vec<(&Decodability, usize)> = Vec::new();
    for o in &outcomes {
        match tally.iter_mut().find(|(seen, _)| *seen == o) {
            Some(entry) => entry.1 += 1,
            None => tally.push((o, 1)),
        }
    }
    let modal = tally
        .iter()
        .fold(None::<&(&Decodability, usize)>, |best, e| match best {
            Some(b) if b.1 >= e.1 => Some(b),
            _ => Some(e),
        })
        .map(|e| e.0.clone())
        .expect("trials >= 1");
    let dissenting_seeds = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| **o != modal)
        .map(|(trial, _)| trial_seed(seed, trial))
        .collect();
    Ok(DofVerdict {
        trials,
        seed,
        generic: tally.len() == 1,
        min_dof: outcomes.iter().map(|o| o.dof).min().expect("nonempty"),
        max_dof: outcomes.iter().map(|o| o.dof).max().expect("nonempty"),
        fully_decodable: outcomes.iter().all(Decodability::all_active_decodable),
        statuses: modal.statuses,
        dof: modal.dof,
        dissenting_seeds,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use super::*;
    use crate::assignment::{mod3_assignment, MessageAssignment};
    use crate::scenarios::figure4_repetition_scheme;
    use crate::topology::{figure4_example, wyner, Coherence};
    use crate::verifier::linalg::real;
    use ReceiverStatus::*;

    fn mod3_scheme(k: usize) -> LinearScheme {
        let a = mod3_assignment(k).unwrap();
        let m: Vec<usize> = (1..=k).map(|i| usize::from(i % 3 != 2)).collect();
        let precoders = (1..=k)
            .filter(|i| i % 3 != 2)
            .map(|i| {
                let tx = *a.transmit_set(i).iter().next().unwrap();
                ((tx, i), real(1, 1, &[1.0]))
            })
            .collect();
        LinearScheme::new(1, m, a, precoders).unwrap()
    }

    #[test]
    fn footprint_sums_cooperating_transmitters() {
        let t = wyner(4).unwrap();
        let a = MessageAssignment::from_sets(vec![
            BTreeSet::new(),
            BTreeSet::new(),
            BTreeSet::from([2, 3]),
            BTreeSet::new(),
        ]);
        let v2 = real(2, 1, &[1.0, 2.0]);
        let v3 = real(2, 1, &[3.0, -1.0]);
        let s = LinearScheme::new(
            2,
            vec![0, 0, 1, 0],
            a,
            BTreeMap::from([((2, 3), v2.clone()), ((3, 3), v3.clone())]),
        )
        .unwrap();
        let h = sample_channel(&t, 2, 11).unwrap();
        let f = footprint(&s, &h, 3, 3).unwrap();
        for slot in 0..2 {
            let expect = h.coefficient(3, 3, slot) * v3[(slot, 0)].re
                + h.coefficient(3, 2, slot) * v2[(slot, 0)].re;
            assert!((f[(slot, 0)].re - expect).abs() < 1e-12);
        }
        // neither transmitter 2 nor 3 reaches receiver 1
        assert_eq!(footprint(&s, &h, 3, 1).unwrap(), CMatrix::zeros(2, 1));
        assert!(footprint(&s, &h, 5, 1).is_err());
    }

    #[test]
    fn scalar_footprint() {
        let t = wyner(2).unwrap();
        let s = LinearScheme::new(
            1,
            vec![1, 0],
            MessageAssignment::from_sets(vec![BTreeSet::from([1]), BTreeSet::new()]),
            BTreeMap::from([((1, 1), real(1, 1, &[2.0]))]),
        )
        .unwrap();
        let h = sample_channel(&t, 1, 0).unwrap();
        let f = footprint(&s, &h, 1, 2).unwrap();
        assert_eq!(f.shape(), (1, 1));
        assert!((f[(0, 0)].re - 2.0 * h.coefficient(2, 1, 0)).abs() < 1e-15);
    }

    #[test]
    fn interference_avoidance_on_three_users() {
        let t = wyner(3).unwrap();
        let h = sample_channel(&t, 1, 0).unwrap();
        let d = zf_decodability(&t, &mod3_scheme(3), &h).unwrap();
        assert_eq!(d.statuses, vec![Decodable, Inactive, Decodable]);
        assert_eq!(d.dof, Dof::integer(2));
    }

    #[test]
    fn repetition_scheme_needs_slow_links() {
        let t = figure4_example();
        let s = figure4_repetition_scheme();
        let h = sample_channel(&t, 2, 4).unwrap();
        let d = zf_decodability(&t, &s, &h).unwrap();
        assert_eq!(d.statuses, vec![Decodable; 3]);
        assert_eq!(d.dof, Dof::new(3, 2));

        let fast = t.with_uniform_coherence(Coherence::UNIT);
        let h = sample_channel(&fast, 2, 4).unwrap();
        let d = zf_decodability(&fast, &s, &h).unwrap();
        assert_eq!(d.statuses, vec![Decodable, Decodable, Undecodable]);
        assert_eq!(d.dof, Dof::integer(1));
    }

    #[test]
    fn monte_carlo_verdicts() {
        let t = wyner(6).unwrap();
        let v = monte_carlo_dof(&t, &mod3_scheme(6), 50, 0).unwrap();
        assert_eq!(v.dof, Dof::integer(4));
        assert!(v.generic && v.fully_decodable);
        assert!(v.dissenting_seeds.is_empty());

        // a scheme whose precoders are all zero decodes nothing
        let a = MessageAssignment::identity(6);
        let zeros = (1..=6).map(|i| ((i, i), CMatrix::zeros(1, 1))).collect();
        let s = LinearScheme::new(1, vec![1; 6], a, zeros).unwrap();
        let v = monte_carlo_dof(&t, &s, 10, 0).unwrap();
        assert_eq!((v.min_dof, v.max_dof), (Dof::zero(), Dof::zero()));
        assert!(!v.fully_decodable);

        assert_eq!(
            monte_carlo_dof(&t, &mod3_scheme(6), 7, 3).unwrap(),
            monte_carlo_dof(&t, &mod3_scheme(6), 7, 3).unwrap()
        );
        assert!(monte_carlo_dof(&t, &mod3_scheme(6), 0, 3).is_err());
        assert!(monte_carlo_dof(&wyner(5).unwrap(), &mod3_scheme(6), 1, 0).is_err());
    }
}
