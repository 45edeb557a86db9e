//! Universal source codes for generalized complementary delivery (GCD) networks.
//!
//! One encoder observes `N_s` correlated memoryless sources and broadcasts a
//! single codeword. Decoder `j` already holds the sources outside its demand
//! set `S_j` and must reproduce the sources inside it. The codes built here
//! are universal: the codebook is a function of the block length, the rate,
//! the network and the alphabets only, never of the source distribution.
//!
//! The crate is organized bottom-up:
//!
//! - [`typekit`]: method-of-types machinery (type classes, V-shells,
//!   ranking, exact entropies and divergences).
//! - [`network`]: the demand family and the optimal rate `R_f = R_v`.
//! - [`graphcode`]: admissible type sets and proper colorings of the
//!   per-type coding graphs.
//! - [`codec`]: fixed-to-fixed and fixed-to-variable encoders/decoders and
//!   the on-disk codebook format.
//! - [`analysis`]: exact error, correct-decoding and length statistics by
//!   type enumeration, with every finite-n bound evaluated exactly.
//! - [`simulate`]: a seeded Monte Carlo harness whose output does not
//!   depend on thread scheduling.

pub mod analysis;
pub mod codec;
pub mod bigmath;
mod error;
pub mod graphcode;
pub mod network;
pub mod rate;
pub mod simulate;
pub mod typekit;

pub use error::{Error, Result};
pub use network::{NetworkSpec, SourceNetwork, SourceSet};
pub use rate::{Rate, Threshold};
pub use typekit::{AlphabetSpec, Distribution, JointType, SequenceTuple};

/// Default limit on the number of items any exhaustive enumeration may visit.
pub const DEFAULT_CAP: u64 = 10_000_000;
