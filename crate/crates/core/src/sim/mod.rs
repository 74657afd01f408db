//! Monte-Carlo ground truth: channel, decoders and the BLER harness.

mod channel;
mod genie;
mod harness;
pub mod rng;
mod sc;
mod scl;

pub use channel::{
    llr, transmit, ChannelHooks, FadingRealization, InterleaverPolicy, MappingKind, MappingSpec, Transmission,
};
pub use genie::{genie_channel_errors, ChannelErrorEstimate};
pub use harness::{
    run_bler, snr_grid, wilson_interval, DecoderConfig, DecoderKind, Payload, SimConfig, SimPoint, SimReport,
    StopRule, CHUNK_TRIALS,
};
pub use sc::{sc_decode, sc_decode_with, CheckNode, Decoded, ScDecoder};
pub use scl::{scl_decode, SclDecoder};
