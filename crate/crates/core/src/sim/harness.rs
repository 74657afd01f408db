//! Monte-Carlo BLER measurement.
//!
//! Trials are grouped in fixed-size chunks. Chunks may run in parallel, but results are
//! folded in chunk order and the stopping rule is checked after each chunk, so a report
//! depends only on the configuration and seed, never on the worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::channel::{llr, transmit, ChannelHooks, MappingKind, MappingSpec};
use super::rng::trial_rng;
use super::sc::{CheckNode, ScDecoder};
use super::scl::SclDecoder;
use crate::bounds::SnrPoint;
use crate::error::{Error, Result};
use crate::polar::{encode, CodeSpec};

/// Trials per chunk.
pub const CHUNK_TRIALS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl { list: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    pub rule: CheckNode,
}

impl DecoderConfig {
    pub fn sc() -> Self {
        DecoderConfig {
            kind: DecoderKind::Sc,
            rule: CheckNode::Exact,
        }
    }

    pub fn scl(list: usize) -> Self {
        DecoderConfig {
            kind: DecoderKind::Scl { list },
            rule: CheckNode::Exact,
        }
    }

    pub fn with_rule(mut self, rule: CheckNode) -> Self {
        self.rule = rule;
        self
    }

    pub fn label(&self) -> String {
        let base = match self.kind {
            DecoderKind::Sc => "sc".to_string(),
            DecoderKind::Scl { list } => format!("scl{list}"),
        };
        match self.rule {
            CheckNode::Exact => base,
            CheckNode::MinSum => format!("{base}-minsum"),
        }
    }
}

enum AnyDecoder {
    Sc(ScDecoder),
    Scl(SclDecoder),
}

impl AnyDecoder {
    fn new(spec: &CodeSpec, cfg: DecoderConfig) -> Result<Self> {
        Ok(match cfg.kind {
            DecoderKind::Sc => AnyDecoder::Sc(ScDecoder::new(spec, cfg.rule)),
            DecoderKind::Scl { list } => AnyDecoder::Scl(SclDecoder::new(spec, list, cfg.rule)?),
        })
    }

    fn info_bits(&mut self, llrs: &[f64]) -> Vec<u8> {
        match self {
            AnyDecoder::Sc(d) => d.decode(llrs).info_bits,
            AnyDecoder::Scl(d) => d.decode(llrs).info_bits,
        }
    }
}

/// Stop a grid point after `target_errors` block errors or `max_trials` trials, whichever first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub max_trials: u64,
    pub target_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_trials: 1_000_000,
            target_errors: 200,
        }
    }
}

/// What the transmitter sends.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Payload {
    /// Fresh uniformly random information bits per trial.
    #[default]
    RandomData,
    /// The all-zero codeword. BPSK with perfect CSI is output-symmetric and SC/SCL decisions
    /// commute with codeword translation, so error rates match random data. Only accepted
    /// under block mapping unless `AllZeroForced` is used.
    AllZero,
    AllZeroForced,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: CodeSpec,
    pub mapping: MappingSpec,
    pub decoder: DecoderConfig,
    pub snr_db: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    pub payload: Payload,
    pub hooks: ChannelHooks,
}

impl SimConfig {
    pub fn new(code: CodeSpec, mapping: MappingSpec, snr_db: Vec<f64>, seed: u64) -> Self {
        SimConfig {
            code,
            mapping,
            decoder: DecoderConfig::sc(),
            snr_db,
            stop: StopRule::default(),
            seed,
            payload: Payload::RandomData,
            hooks: ChannelHooks::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() || self.snr_db.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("SNR grid must be non-empty and finite"));
        }
        if self.mapping.length() != self.code.length() {
            return Err(Error::invalid(format!(
                "mapping covers {} bits but the code has {}",
                self.mapping.length(),
                self.code.length()
            )));
        }
        if self.stop.max_trials == 0 || self.stop.target_errors == 0 {
            return Err(Error::invalid("stop rule needs positive limits"));
        }
        if self.payload == Payload::AllZero && self.mapping.kind == MappingKind::Random {
            return Err(Error::invalid(
                "all-zero payload under random mapping needs the explicit forced mode",
            ));
        }
        Ok(())
    }
}

/// Results at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub bler_lo: f64,
    pub bler_hi: f64,
    pub bit_errors: u64,
    pub ber: f64,
}

impl SimPoint {
    /// Binomial standard error of the BLER estimate.
    pub fn sigma(&self) -> f64 {
        (self.bler * (1.0 - self.bler) / self.trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub code_length: usize,
    pub info_set: Vec<usize>,
    pub mapping: String,
    pub decoder: String,
    pub seed: u64,
    pub stop: StopRule,
    pub points: Vec<SimPoint>,
}

/// 95% Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Default, Clone, Copy)]
struct Tally {
    trials: u64,
    block_errors: u64,
    bit_errors: u64,
}

fn run_chunk(cfg: &SimConfig, snr_index: usize, snr: SnrPoint, first: u64, count: u64) -> Result<Tally> {
    let mut decoder = AnyDecoder::new(&cfg.code, cfg.decoder)?;
    let k = cfg.code.k();
    let mut tally = Tally::default();
    for trial in first..first + count {
        let mut rng = trial_rng(cfg.seed, snr_index, trial);
        let info: Vec<u8> = match cfg.payload {
            Payload::RandomData => (0..k).map(|_| rng.random::<bool>() as u8).collect(),
            Payload::AllZero | Payload::AllZeroForced => vec![0; k],
        };
        let x = encode(&cfg.code, &info)?;
        let tx = transmit(&x, &cfg.mapping, snr, &mut rng, cfg.hooks)?;
        let decided = decoder.info_bits(&llr(&tx, &cfg.mapping, snr));
        let errs = decided.iter().zip(&info).filter(|(a, b)| a != b).count() as u64;
        tally.trials += 1;
        tally.bit_errors += errs;
        tally.block_errors += (errs > 0) as u64;
    }
    Ok(tally)
}

fn run_point(cfg: &SimConfig, snr_index: usize, snr_db: f64) -> Result<SimPoint> {
    let snr = SnrPoint::from_db(snr_db)?;
    let stop = cfg.stop;
    let total_chunks = stop.max_trials.div_ceil(CHUNK_TRIALS);
    let batch = (rayon::current_num_threads() as u64).max(1) * 2;
    let mut acc = Tally::default();
    let mut next = 0u64;
    'outer: while next < total_chunks {
        let end = (next + batch).min(total_chunks);
        let results: Vec<Result<Tally>> = (next..end)
            .into_par_iter()
            .map(|c| {
                let first = c * CHUNK_TRIALS;
                let count = CHUNK_TRIALS.min(stop.max_trials - first);
                run_chunk(cfg, snr_index, snr, first, count)
            })
            .collect();
        for r in results {
            let t = r?;
            acc.trials += t.trials;
            acc.block_errors += t.block_errors;
            acc.bit_errors += t.bit_errors;
            if acc.block_errors >= stop.target_errors {
                break 'outer;
            }
        }
        next = end;
    }
    let (lo, hi) = wilson_interval(acc.block_errors, acc.trials);
    Ok(SimPoint {
        snr_db,
        trials: acc.trials,
        block_errors: acc.block_errors,
        bler: acc.block_errors as f64 / acc.trials as f64,
        bler_lo: lo,
        bler_hi: hi,
        bit_errors: acc.bit_errors,
        ber: acc.bit_errors as f64 / (acc.trials as f64 * cfg.code.k().max(1) as f64),
    })
}

/// Simulate every grid point.
pub fn run_bler(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let points = cfg
        .snr_db
        .iter()
        .enumerate()
        .map(|(idx, &db)| run_point(cfg, idx, db))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimReport {
        code_length: cfg.code.length(),
        info_set: cfg.code.info_set().to_vec(),
        mapping: cfg.mapping.label(),
        decoder: cfg.decoder.label(),
        seed: cfg.seed,
        stop: cfg.stop,
        points,
    })
}

/// Evenly spaced grid `start, start+step, ..., <= stop`.
pub fn snr_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(Error::invalid(format!("bad SNR grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}
