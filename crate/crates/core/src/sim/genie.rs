//! Per-channel error rates of genie-aided SC: every earlier bit is known, so the error event
//! of polarized channel `i` is simply a negative leaf LLR when the all-zero word is sent.

use rayon::prelude::*;

use super::channel::{llr, transmit, ChannelHooks, MappingSpec};
use super::harness::CHUNK_TRIALS;
use super::rng::trial_rng;
use super::sc::{CheckNode, ScDecoder};
use crate::bounds::SnrPoint;
use crate::error::{Error, Result};
use crate::polar::{BitBlock, CodeSpec};

/// Error counts per polarized channel (index `i - 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelErrorEstimate {
    pub trials: u64,
    pub errors: Vec<u64>,
}

impl ChannelErrorEstimate {
    pub fn rate(&self, i: usize) -> f64 {
        self.errors[i - 1] as f64 / self.trials as f64
    }

    /// Binomial standard error of [`Self::rate`].
    pub fn sigma(&self, i: usize) -> f64 {
        let p = self.rate(i);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Estimate the error probability of every polarized channel by genie-aided SC.
pub fn genie_channel_errors(
    map: &MappingSpec,
    snr: SnrPoint,
    trials: u64,
    seed: u64,
    rule: CheckNode,
) -> Result<ChannelErrorEstimate> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let n = map.length();
    let spec = CodeSpec::new(n, 1..=n)?;
    let zero = BitBlock::zeros(n);
    let u = vec![0u8; n];
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let per_chunk: Vec<Result<Vec<u64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut dec = ScDecoder::new(&spec, rule);
            let mut leaf = vec![0.0; n];
            let mut counts = vec![0u64; n];
            let first = c * CHUNK_TRIALS;
            for trial in first..(first + CHUNK_TRIALS).min(trials) {
                let mut rng = trial_rng(seed, 0, trial);
                let tx = transmit(&zero, map, snr, &mut rng, ChannelHooks::default())?;
                dec.genie_leaf_llrs(&llr(&tx, map, snr), &u, &mut leaf);
                for (c, l) in counts.iter_mut().zip(&leaf) {
                    *c += (*l < 0.0) as u64;
                }
            }
            Ok(counts)
        })
        .collect();
    let mut errors = vec![0u64; n];
    for chunk in per_chunk {
        for (e, c) in errors.iter_mut().zip(chunk?) {
            *e += c;
        }
    }
    Ok(ChannelErrorEstimate { trials, errors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_channels_never_err() {
        let map = MappingSpec::block(16, 2).unwrap();
        let est = genie_channel_errors(&map, SnrPoint::new(1e6).unwrap(), 2000, 1, CheckNode::Exact).unwrap();
        assert!(est.errors.iter().all(|&e| e == 0));
    }

    #[test]
    fn reproducible_and_polarizing() {
        let map = MappingSpec::block(16, 2).unwrap();
        let snr = SnrPoint::from_db(3.0).unwrap();
        let a = genie_channel_errors(&map, snr, 4000, 9, CheckNode::Exact).unwrap();
        let b = genie_channel_errors(&map, snr, 4000, 9, CheckNode::Exact).unwrap();
        assert_eq!(a, b);
        assert!(a.rate(1) > a.rate(16));
        assert!(a.rate(1) > 0.3);
    }
}
