//! Degrees-of-freedom analysis for topological interference management with
//! transmitter cooperation and no channel knowledge at the transmitters.
//!
//! The crate computes achievable sum-DoF values from interference-avoidance
//! schedules, converse bounds from receiver-set certificates, and checks
//! explicit linear schemes numerically by generic-rank Monte Carlo.
//!
//! ```
//! use timdof::{achievable_dof, upper_bound, wyner, Dof};
//!
//! let t = wyner(6).unwrap();
//! assert_eq!(achievable_dof(&t).unwrap().value(), Dof::integer(4));
//! assert_eq!(upper_bound(&t, 12).value(), Dof::integer(4));
//! ```

pub mod assignment;
pub mod bounds;
pub mod certificate;
pub mod dof;
mod error;
pub mod matching;
pub mod report;
pub mod repro;
pub mod scenarios;
pub mod scheduler;
pub mod topology;
pub mod verifier;

pub use assignment::{mod3_assignment, MessageAssignment};
pub use bounds::{
    best_condition1_bound, check_condition1, identical_neighbors_bound, upper_bound,
    Condition1Certificate, Condition1Failure,
};
pub use certificate::{CertificateKind, DofCertificate, Evidence};
pub use dof::Dof;
pub use error::{Error, Result};
pub use report::{analyze, AnalysisReport};
pub use scheduler::{
    achievable_dof, schedule_exact, schedule_greedy, schedule_to_scheme, Schedule,
};
pub use topology::{
    cyclic_wyner, figure4_example, fully_connected, wyner, Coherence, Link, ReceiverSet, Topology,
};
pub use verifier::{ChannelRealization, LinearScheme};
