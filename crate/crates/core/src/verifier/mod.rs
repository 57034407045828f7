//! Channel sampling and numerical verification of linear schemes.
//!
//! Everything here works in the noise-free generic-rank regime: a scheme's
//! DoF is read off from zero-forcing separability of desired and
//! interfering column spaces, checked over independent channel draws.

mod channel;
mod decode;
mod lemma2;
pub mod linalg;
mod scheme;

pub use channel::{sample_channel, trial_seed, ChannelRealization};
pub use decode::{
    footprint, monte_carlo_dof, zf_decodability, Decodability, DofVerdict, ReceiverStatus,
};
pub use lemma2::{check_lemma2, Lemma2Report};
pub use linalg::CMatrix;
pub use scheme::{random_precoder, LinearScheme};
