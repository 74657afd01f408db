//! Block Rayleigh fading channel with BPSK.
//!
//! The model is real-valued: `y = α s + n` with `s = 1 - 2x` (`E_s = 1`) and real Gaussian
//! noise of variance `N_0/2 = 1/(2γ)`. With BPSK and perfect CSI the quadrature component of
//! a complex baseband model carries no information, so this is equivalent to the complex model.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::rng::interleaver_rng;
use crate::bounds::SnrPoint;
use crate::error::{Error, Result};
use crate::polar::BitBlock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingKind {
    /// Codeword split contiguously into blocks.
    Block,
    /// Uniform interleaving before block assignment.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InterleaverPolicy {
    /// A fresh uniformly random permutation per codeword.
    Fresh,
    /// One permutation drawn from the given seed and reused for every codeword.
    Fixed(u64),
}

/// How codeword bits meet the `L` fading blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingSpec {
    pub kind: MappingKind,
    pub blocks: usize,
    pub block_size: usize,
    pub interleaver: InterleaverPolicy,
    #[serde(skip)]
    fixed_permutation: Option<Vec<usize>>,
}

impl MappingSpec {
    pub fn block(length: usize, blocks: usize) -> Result<Self> {
        Self::new(MappingKind::Block, length, blocks, InterleaverPolicy::Fresh)
    }

    pub fn random(length: usize, blocks: usize, interleaver: InterleaverPolicy) -> Result<Self> {
        Self::new(MappingKind::Random, length, blocks, interleaver)
    }

    pub fn new(
        kind: MappingKind,
        length: usize,
        blocks: usize,
        interleaver: InterleaverPolicy,
    ) -> Result<Self> {
        if blocks == 0 || !length.is_multiple_of(blocks) {
            return Err(Error::invalid(format!("L={blocks} does not divide N={length}")));
        }
        let fixed_permutation = match (kind, interleaver) {
            (MappingKind::Random, InterleaverPolicy::Fixed(seed)) => {
                let mut p: Vec<usize> = (0..length).collect();
                p.shuffle(&mut interleaver_rng(seed));
                Some(p)
            }
            _ => None,
        };
        Ok(MappingSpec {
            kind,
            blocks,
            block_size: length / blocks,
            interleaver,
            fixed_permutation,
        })
    }

    pub fn length(&self) -> usize {
        self.blocks * self.block_size
    }

    pub fn label(&self) -> String {
        match (self.kind, self.interleaver) {
            (MappingKind::Block, _) => format!("block-L{}", self.blocks),
            (MappingKind::Random, InterleaverPolicy::Fresh) => format!("random-L{}", self.blocks),
            (MappingKind::Random, InterleaverPolicy::Fixed(s)) => {
                format!("random-L{}-fixed{s}", self.blocks)
            }
        }
    }

    /// `slot[p]`: channel slot that carries codeword bit `p`, or `None` for the identity.
    fn draw_permutation<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<usize>> {
        match self.kind {
            MappingKind::Block => None,
            MappingKind::Random => Some(match &self.fixed_permutation {
                Some(p) => p.clone(),
                None => {
                    let mut p: Vec<usize> = (0..self.length()).collect();
                    p.shuffle(rng);
                    p
                }
            }),
        }
    }
}

/// Fading amplitudes `α_1..α_L` for one codeword.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    pub alphas: Vec<f64>,
}

impl FadingRealization {
    /// I.i.d. Rayleigh amplitudes with `E[α²] = 1`.
    pub fn draw<R: Rng + ?Sized>(blocks: usize, rng: &mut R) -> Self {
        let alphas = (0..blocks)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                ((re * re + im * im) / 2.0).sqrt()
            })
            .collect();
        FadingRealization { alphas }
    }
}

/// Test hooks for the channel.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ChannelHooks {
    /// Replace every fading amplitude by this value.
    pub forced_alpha: Option<f64>,
}

/// One channel use: received samples in channel-slot order.
#[derive(Debug, Clone)]
pub struct Transmission {
    pub received: Vec<f64>,
    pub realization: FadingRealization,
    /// Interleaver used (`slot[p]` for codeword bit `p`); `None` under block mapping.
    pub permutation: Option<Vec<usize>>,
}

/// Send a codeword through the block fading channel.
pub fn transmit<R: Rng + ?Sized>(
    codeword: &BitBlock,
    map: &MappingSpec,
    snr: SnrPoint,
    rng: &mut R,
    hooks: ChannelHooks,
) -> Result<Transmission> {
    let n = map.length();
    if codeword.len() != n {
        return Err(Error::invalid(format!(
            "codeword length {} does not match mapping length {n}",
            codeword.len()
        )));
    }
    let permutation = map.draw_permutation(rng);
    let mut realization = FadingRealization::draw(map.blocks, rng);
    if let Some(a) = hooks.forced_alpha {
        realization.alphas.iter_mut().for_each(|x| *x = a);
    }
    let mut symbols = vec![0.0; n];
    for (p, &bit) in codeword.bits().iter().enumerate() {
        let slot = permutation.as_ref().map_or(p, |perm| perm[p]);
        symbols[slot] = 1.0 - 2.0 * bit as f64;
    }
    let sigma = (0.5 / snr.linear()).sqrt();
    let received = symbols
        .iter()
        .enumerate()
        .map(|(slot, &s)| {
            let noise: f64 = StandardNormal.sample(rng);
            realization.alphas[slot / map.block_size] * s + sigma * noise
        })
        .collect();
    Ok(Transmission {
        received,
        realization,
        permutation,
    })
}

/// Channel LLRs `4γα y` in codeword order (de-interleaved).
pub fn llr(tx: &Transmission, map: &MappingSpec, snr: SnrPoint) -> Vec<f64> {
    let scale = 4.0 * snr.linear();
    let n = tx.received.len();
    (0..n)
        .map(|p| {
            let slot = tx.permutation.as_ref().map_or(p, |perm| perm[p]);
            scale * tx.realization.alphas[slot / map.block_size] * tx.received[slot]
        })
        .collect()
}
