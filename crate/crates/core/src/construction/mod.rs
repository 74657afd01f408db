//! Reliability rankings of polarized channels and information-set selection.

mod diversity;
mod ga;
mod pdw;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use diversity::{diversity_report_block, diversity_report_random, ChannelDiversity, DiversityReport};
pub use ga::{ga_means, ln_error_probability, ln_phi, phi_inverse_ln};
pub use pdw::{pdw_block, pdw_block_with, pdw_random, pdw_random_with, pdw_single, PdwVariant};

use crate::bounds::SnrPoint;
use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::sim::{genie_channel_errors, CheckNode, InterleaverPolicy, MappingKind, MappingSpec};
use crate::spectrum::SpectrumLibrary;

/// Smallest trial count accepted by the Monte-Carlo baseline.
pub const MC_MIN_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    PdwBlock,
    PdwRandom,
    Ga,
    Mc,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::PdwBlock => "pdw-block",
            Metric::PdwRandom => "pdw-random",
            Metric::Ga => "ga",
            Metric::Mc => "mc",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pdw-block" => Ok(Metric::PdwBlock),
            "pdw-random" => Ok(Metric::PdwRandom),
            "ga" => Ok(Metric::Ga),
            "mc" => Ok(Metric::Mc),
            other => Err(Error::invalid(format!(
                "unknown metric `{other}` (expected pdw-block, pdw-random, ga or mc)"
            ))),
        }
    }
}

/// Design SNR used when none is given: 0 dB below rate 1/2, 3 dB from there up.
pub fn default_design_snr_db(rate: f64) -> f64 {
    if rate >= 0.5 {
        3.0
    } else {
        0.0
    }
}

fn default_trials() -> u64 {
    100_000
}

fn default_mapping() -> MappingKind {
    MappingKind::Block
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub length: usize,
    /// Number of fading blocks `L`.
    pub blocks: usize,
    pub design_snr_db: f64,
    #[serde(default)]
    pub variant: PdwVariant,
    #[serde(default)]
    pub require_full_diversity: bool,
    /// Channel mapping simulated by the Monte-Carlo baseline.
    #[serde(default = "default_mapping")]
    pub mc_mapping: MappingKind,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ConstructionParams {
    pub fn new(length: usize, blocks: usize, design_snr_db: f64) -> Self {
        ConstructionParams {
            length,
            blocks,
            design_snr_db,
            variant: PdwVariant::Max,
            require_full_diversity: false,
            mc_mapping: MappingKind::Block,
            trials: default_trials(),
            seed: 0,
        }
    }

    pub fn design_snr(&self) -> Result<SnrPoint> {
        SnrPoint::from_db(self.design_snr_db)
    }

    fn block_size(&self) -> Result<usize> {
        if !self.length.is_power_of_two() || self.length < 2 {
            return Err(Error::invalid(format!(
                "N={} is not a power of two >= 2",
                self.length
            )));
        }
        if self.blocks == 0 || !self.length.is_multiple_of(self.blocks) {
            return Err(Error::invalid(format!(
                "L={} does not divide N={}",
                self.blocks, self.length
            )));
        }
        Ok(self.length / self.blocks)
    }
}

/// Channel scores and the induced reliability order. Higher score means less reliable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub metric: Metric,
    pub params: ConstructionParams,
    /// Score of channel `i` at position `i - 1`.
    pub scores: Vec<f64>,
    /// Channels from most to least reliable.
    pub order: Vec<usize>,
    /// Channels moved behind all others for lacking full diversity.
    #[serde(default)]
    pub demoted: Vec<usize>,
}

/// Ascending score; equal scores put the larger index first.
pub fn order_by_score(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=scores.len()).collect();
    order.sort_by(|&a, &b| scores[a - 1].total_cmp(&scores[b - 1]).then(b.cmp(&a)));
    order
}

impl RankingResult {
    pub fn from_scores(metric: Metric, params: ConstructionParams, scores: Vec<f64>) -> Self {
        let order = order_by_score(&scores);
        RankingResult {
            metric,
            params,
            scores,
            order,
            demoted: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.scores.len()
    }

    /// The `k` most reliable channels, ascending.
    pub fn info_set(&self, k: usize) -> Result<Vec<usize>> {
        if k > self.length() {
            return Err(Error::invalid(format!("K={k} exceeds N={}", self.length())));
        }
        let mut set = self.order[..k].to_vec();
        set.sort_unstable();
        Ok(set)
    }

    pub fn code(&self, k: usize) -> Result<CodeSpec> {
        CodeSpec::new(self.length(), self.info_set(k)?)
    }

    /// Move `flagged` channels behind every other channel, keeping relative order.
    pub fn demote(mut self, flagged: &[usize]) -> Self {
        let (bad, good): (Vec<usize>, Vec<usize>) = self.order.iter().partition(|i| flagged.contains(i));
        self.order = good.into_iter().chain(bad.iter().copied()).collect();
        self.demoted = bad;
        self
    }

    /// JSON document with the information set for `k`.
    pub fn to_json(&self, k: usize) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        v["info_set"] = serde_json::to_value(self.info_set(k)?)?;
        v["k"] = k.into();
        Ok(v)
    }
}

fn need_lib(lib: Option<&SpectrumLibrary>) -> Result<&SpectrumLibrary> {
    lib.ok_or_else(|| Error::MissingTable("this metric needs spectrum tables".into()))
}

/// Genie-aided Monte-Carlo baseline: score is the empirical error rate of each channel.
pub fn mc_baseline(params: &ConstructionParams) -> Result<RankingResult> {
    if params.trials < MC_MIN_TRIALS {
        return Err(Error::invalid(format!(
            "Monte-Carlo baseline needs at least {MC_MIN_TRIALS} trials"
        )));
    }
    params.block_size()?;
    let map = MappingSpec::new(
        params.mc_mapping,
        params.length,
        params.blocks,
        InterleaverPolicy::Fresh,
    )?;
    let est = genie_channel_errors(
        &map,
        params.design_snr()?,
        params.trials,
        params.seed,
        CheckNode::Exact,
    )?;
    let scores = (1..=params.length).map(|i| est.rate(i)).collect();
    Ok(RankingResult::from_scores(Metric::Mc, params.clone(), scores))
}

/// Gaussian-approximation baseline with initial LLR mean `4γ`.
pub fn ga_baseline(params: &ConstructionParams) -> Result<RankingResult> {
    params.block_size()?;
    let snr = params.design_snr()?;
    let scores = ga_means(params.length, snr.linear())
        .into_iter()
        .map(ln_error_probability)
        .collect();
    Ok(RankingResult::from_scores(Metric::Ga, params.clone(), scores))
}

fn pdw_scores(metric: Metric, params: &ConstructionParams, lib: &SpectrumLibrary) -> Result<Vec<f64>> {
    let n = params.length;
    let m = params.block_size()?;
    let snr = params.design_snr()?;
    let variant = params.variant;
    let score = |i: usize| -> Result<f64> {
        match (metric, params.blocks) {
            (Metric::PdwBlock, 1) => pdw_single(lib.spectrum(n)?, i, snr),
            (Metric::PdwBlock, 2) => pdw_block_with(lib.split(n)?, i, snr, variant),
            (Metric::PdwBlock, l) => Err(Error::invalid(format!(
                "block-mapping PDW needs exact split spectra, available for L <= 2, not L={l}"
            ))),
            _ => pdw_random_with(lib.spectrum(n)?, i, params.blocks, m, snr, variant),
        }
    };
    (1..=n).into_par_iter().map(score).collect()
}

/// Channels without full diversity at their minimum weight.
pub fn full_diversity_flags(
    metric: Metric,
    params: &ConstructionParams,
    lib: Option<&SpectrumLibrary>,
) -> Result<Vec<usize>> {
    let m = params.block_size()?;
    if params.blocks == 1 {
        return Ok(Vec::new());
    }
    let all: Vec<usize> = (1..=params.length).collect();
    let lib = need_lib(lib)?;
    let random =
        metric == Metric::PdwRandom || (metric == Metric::Mc && params.mc_mapping == MappingKind::Random);
    let report = if random || params.blocks > 2 {
        diversity_report_random(lib.spectrum(params.length)?, params.blocks, m, &all)?
    } else {
        diversity_report_block(lib.split(params.length)?, &all)?
    };
    Ok(report.flagged())
}

/// Rank all channels by `metric`. PDW metrics and the full-diversity filter need `lib`.
pub fn rank(
    metric: Metric,
    params: &ConstructionParams,
    lib: Option<&SpectrumLibrary>,
) -> Result<RankingResult> {
    let ranking = match metric {
        Metric::PdwBlock | Metric::PdwRandom => {
            let scores = pdw_scores(metric, params, need_lib(lib)?)?;
            RankingResult::from_scores(metric, params.clone(), scores)
        }
        Metric::Ga => ga_baseline(params)?,
        Metric::Mc => mc_baseline(params)?,
    };
    if params.require_full_diversity {
        let flagged = full_diversity_flags(metric, params, lib)?;
        return Ok(ranking.demote(&flagged));
    }
    Ok(ranking)
}
