//! Pairwise error probabilities and union bounds on polarized-channel and block error
//! probability over the block Rayleigh fading channel.
//!
//! Everything is accumulated in the natural-log domain. Union bounds can exceed one at
//! low SNR; [`BoundValue`] keeps the raw value and reports a clipped copy.

mod low_snr;
mod pattern;
mod random;

pub use low_snr::{low_snr_bound_block, low_snr_bound_random};
pub use pattern::{
    enumerate_patterns, ln_pattern_probability, pattern_probability, pattern_probability_exact, WeightPattern,
};
pub(crate) use random::check_blocks;
pub use random::{bler_bound_random, channel_error_bound_random};

use serde::{Deserialize, Serialize};

use crate::combinatorics::{ln_big, LogSum};
use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::spectrum::SplitSpectrumTable;

/// Extra weight above `d_min` summed by default.
pub const DEFAULT_DMAX_SPAN: usize = 32;

/// Linear symbol SNR `γ = E_s/N_0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SnrPoint {
    es_over_n0: f64,
}

impl SnrPoint {
    pub fn new(es_over_n0: f64) -> Result<Self> {
        if !(es_over_n0 > 0.0 && es_over_n0.is_finite()) {
            return Err(Error::invalid(format!(
                "SNR must be positive and finite, got {es_over_n0}"
            )));
        }
        Ok(SnrPoint { es_over_n0 })
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn linear(&self) -> f64 {
        self.es_over_n0
    }

    pub fn db(&self) -> f64 {
        10.0 * self.es_over_n0.log10()
    }
}

/// A union-bound evaluation. `ln_raw` is the unclipped natural log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub ln_raw: f64,
    /// Largest total weight included in the sum (per channel; the maximum over channels for BLER).
    pub d_max: usize,
    /// True when some weights up to `N` were left out.
    pub truncated: bool,
    /// Terms dropped because a validity condition failed (low-SNR forms only).
    pub skipped_terms: usize,
}

impl BoundValue {
    pub fn raw(&self) -> f64 {
        self.ln_raw.exp()
    }

    pub fn clipped(&self) -> f64 {
        self.raw().min(1.0)
    }

    /// Label used in reports.
    pub fn kind_label(&self) -> &'static str {
        if self.truncated {
            "truncated union bound"
        } else {
            "union bound"
        }
    }

    /// Sum of several bounds (e.g. over an information set).
    pub(crate) fn sum(parts: &[BoundValue], length: usize) -> BoundValue {
        let mut acc = LogSum::new();
        for p in parts {
            acc.push(p.ln_raw);
        }
        let d_max = parts.iter().map(|p| p.d_max).max().unwrap_or(0);
        BoundValue {
            ln_raw: acc.value(),
            d_max,
            truncated: parts.iter().any(|p| p.truncated) || d_max < length,
            skipped_terms: parts.iter().map(|p| p.skipped_terms).sum(),
        }
    }
}

/// Resolve the truncation weight for a channel with minimum weight `d_min`.
pub(crate) fn resolve_dmax(requested: Option<usize>, d_min: usize, length: usize) -> Result<usize> {
    let d_max = requested.unwrap_or_else(|| length.min(d_min + DEFAULT_DMAX_SPAN));
    if d_max > length {
        return Err(Error::invalid(format!("d_max={d_max} exceeds N={length}")));
    }
    Ok(d_max)
}

/// `ln Π_l 1/(1 + d_l γ)`.
pub fn ln_pep_block(d: &[usize], snr: SnrPoint) -> f64 {
    let g = snr.linear();
    -d.iter().map(|&dl| (dl as f64 * g).ln_1p()).sum::<f64>()
}

/// Pairwise error probability bound `Π_l 1/(1 + d_l γ)` for a block-wise distance vector.
pub fn pep_block(d: &[usize], snr: SnrPoint) -> f64 {
    ln_pep_block(d, snr).exp()
}

/// High-SNR view of a pairwise error event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrPep {
    pub diversity_order: usize,
    /// Product of the nonzero block distances.
    pub product_distance: f64,
    /// `(Π d_l)^{-1} γ^{-L}`; `None` when some block carries no weight.
    pub bound: Option<f64>,
    pub partial_diversity: bool,
}

pub fn high_snr_pep(d: &[usize], snr: SnrPoint) -> HighSnrPep {
    let nonzero: Vec<f64> = d.iter().filter(|&&x| x > 0).map(|&x| x as f64).collect();
    let product_distance = nonzero.iter().product();
    let partial = nonzero.len() < d.len();
    let bound = (!partial).then(|| {
        let ln = -nonzero.iter().map(|x| x.ln()).sum::<f64>() - d.len() as f64 * snr.linear().ln();
        ln.exp()
    });
    HighSnrPep {
        diversity_order: nonzero.len(),
        product_distance,
        bound,
        partial_diversity: partial,
    }
}

/// Union bound on the error probability of polarized channel `i` under block mapping with two
/// fading blocks, summed over all split weights with `d_min <= j + k <= d_max`.
pub fn channel_error_bound_block(
    split: &SplitSpectrumTable,
    i: usize,
    snr: SnrPoint,
    d_max: Option<usize>,
) -> Result<BoundValue> {
    let n = split.length();
    let row = split.polar_row(i)?;
    let d_min = split.d_min(i)?;
    let d_max = resolve_dmax(d_max, d_min, n)?;
    let mut acc = LogSum::new();
    for (j, k, count) in row.iter_nonzero() {
        if j + k > d_max {
            continue;
        }
        acc.push(ln_big(count) + ln_pep_block(&[j, k], snr));
    }
    Ok(BoundValue {
        ln_raw: acc.value(),
        d_max,
        truncated: d_max < n,
        skipped_terms: 0,
    })
}

/// Block error bound for block mapping: the channel bounds summed over the information set.
pub fn bler_bound_block(
    split: &SplitSpectrumTable,
    spec: &CodeSpec,
    snr: SnrPoint,
    d_max: Option<usize>,
) -> Result<BoundValue> {
    check_length(spec, split.length())?;
    let parts = spec
        .info_set()
        .iter()
        .map(|&i| channel_error_bound_block(split, i, snr, d_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundValue::sum(&parts, spec.length()))
}

pub(crate) fn check_length(spec: &CodeSpec, table_length: usize) -> Result<()> {
    if spec.length() != table_length {
        return Err(Error::invalid(format!(
            "code length {} does not match table length {table_length}",
            spec.length()
        )));
    }
    Ok(())
}
