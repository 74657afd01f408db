//! Polar codes on block Rayleigh fading channels.
//!
//! The crate builds exact split weight enumerators of polar subcodes, turns
//! them into union bounds on polarized-channel and block error probability
//! for block and random (interleaved) mapping, ranks polarized channels by the
//! polarized diversity weight (PDW), and checks everything against SC/SCL
//! Monte-Carlo simulation.
//!
//! Conventions used throughout:
//! - codewords are `x = u F_N` with `F_N = [[1,0],[1,1]]^{⊗n}` and no
//!   bit-reversal permutation;
//! - channel, row and information indices are 1-based;
//! - SNR values are the linear symbol SNR `γ = E_s/N_0` unless a name says `_db`.
//!
//! Module map:
//! - [`polar`]: encoder, subcodes and the exhaustive enumeration oracle;
//! - [`spectrum`]: exact (split) weight enumerators via MacWilliams identities;
//! - [`bounds`]: pairwise error probabilities and union bounds;
//! - [`construction`]: PDW, GA and Monte-Carlo reliability rankings;
//! - [`sim`]: block fading channel, SC/SCL decoders and the BLER harness;
//! - [`experiment`] and [`verify`]: config-driven runs and self-checks.

pub mod bounds;
pub mod combinatorics;
pub mod construction;
pub mod error;
pub mod experiment;
pub mod polar;
pub mod sim;
pub mod spectrum;
pub mod verify;

pub use bounds::SnrPoint;
pub use error::{Error, Result};
pub use polar::{encode, BitBlock, CodeSpec, SubcodeId, SubcodeKind};
