//! Union bounds under random mapping: the polar spectrum weighted by the probability of each
//! fading-block pattern.

use super::pattern::{enumerate_patterns, ln_pattern_probability, WeightPattern};
use super::{check_length, resolve_dmax, BoundValue, SnrPoint};
use crate::combinatorics::{ln_big, LogSum};
use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::spectrum::SpectrumTable;

/// `ln Π_v (1/(1 + vγ))^{f_v}`.
pub(crate) fn ln_pattern_pep(p: &WeightPattern, snr: SnrPoint) -> f64 {
    let g = snr.linear();
    -p.counts()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(v, &f)| f as f64 * (v as f64 * g).ln_1p())
        .sum::<f64>()
}

pub(crate) fn check_blocks(length: usize, blocks: usize, block_size: usize) -> Result<()> {
    if blocks == 0 || blocks * block_size != length {
        return Err(Error::invalid(format!(
            "L={blocks} blocks of M={block_size} do not cover N={length}"
        )));
    }
    Ok(())
}

/// Union bound on the error probability of polarized channel `i` when a uniform interleaver
/// scatters the codeword over `blocks` fading blocks of `block_size` bits.
///
/// With one block this is the classical `Σ_d A(d) / (1 + dγ)`.
pub fn channel_error_bound_random(
    spectrum: &SpectrumTable,
    i: usize,
    blocks: usize,
    block_size: usize,
    snr: SnrPoint,
    d_max: Option<usize>,
) -> Result<BoundValue> {
    let n = spectrum.length();
    check_blocks(n, blocks, block_size)?;
    let row = spectrum.polar_row(i)?;
    let d_min = spectrum.d_min(i)?;
    let d_max = resolve_dmax(d_max, d_min, n)?;
    let mut acc = LogSum::new();
    for (d, count) in row.iter().enumerate().take(d_max + 1).skip(d_min) {
        if count.bits() == 0 {
            continue;
        }
        let ln_a = ln_big(count);
        for p in enumerate_patterns(blocks, block_size, d) {
            acc.push(ln_a + ln_pattern_probability(&p) + ln_pattern_pep(&p, snr));
        }
    }
    Ok(BoundValue {
        ln_raw: acc.value(),
        d_max,
        truncated: d_max < n,
        skipped_terms: 0,
    })
}

/// Block error bound under random mapping: channel bounds summed over the information set.
pub fn bler_bound_random(
    spectrum: &SpectrumTable,
    spec: &CodeSpec,
    blocks: usize,
    block_size: usize,
    snr: SnrPoint,
    d_max: Option<usize>,
) -> Result<BoundValue> {
    check_length(spec, spectrum.length())?;
    let parts = spec
        .info_set()
        .iter()
        .map(|&i| channel_error_bound_random(spectrum, i, blocks, block_size, snr, d_max))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundValue::sum(&parts, spec.length()))
}
