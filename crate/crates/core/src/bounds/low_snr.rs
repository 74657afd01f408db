//! Low-SNR approximations of the channel error bounds.
//!
//! Both forms keep only the tail part of the exponential-integral split, so they are
//! approximations rather than guaranteed bounds. A term is admissible only while every
//! denominator `1 + xγ - ln C` stays positive; inadmissible terms are skipped and counted.

use super::pattern::{enumerate_patterns, WeightPattern};
use super::random::check_blocks;
use super::{resolve_dmax, BoundValue, SnrPoint};
use crate::combinatorics::{ln_big, ln_binomial, LogSum};
use crate::error::{Error, Result};
use crate::spectrum::{SpectrumTable, SplitSpectrumTable};

fn finish(acc: LogSum, skipped: usize, d_max: usize, length: usize) -> Result<BoundValue> {
    if acc.is_empty() {
        return Err(Error::BoundInapplicable { skipped });
    }
    Ok(BoundValue {
        ln_raw: acc.value(),
        d_max,
        truncated: d_max < length,
        skipped_terms: skipped,
    })
}

/// Low-SNR form under block mapping with two fading blocks:
/// `Σ A(d) Π_l e^{-(d_l γ + 1)} / (1 + d_l γ - V)` with `V = ln A(d) / 2`.
pub fn low_snr_bound_block(
    split: &SplitSpectrumTable,
    i: usize,
    snr: SnrPoint,
    d_max: Option<usize>,
) -> Result<BoundValue> {
    let n = split.length();
    let row = split.polar_row(i)?;
    let d_max = resolve_dmax(d_max, split.d_min(i)?, n)?;
    let g = snr.linear();
    let mut acc = LogSum::new();
    let mut skipped = 0;
    for (j, k, count) in row.iter_nonzero() {
        if j + k > d_max {
            continue;
        }
        let ln_a = ln_big(count);
        let v = ln_a / 2.0;
        let mut term = ln_a;
        let mut valid = true;
        for dl in [j, k] {
            let x = dl as f64 * g;
            let denom = 1.0 + x - v;
            if denom <= 0.0 {
                valid = false;
                break;
            }
            term += -(x + 1.0) - denom.ln();
        }
        if valid {
            acc.push(term);
        } else {
            skipped += 1;
        }
    }
    finish(acc, skipped, d_max, n)
}

/// One pattern term of the random-mapping low-SNR form, or `None` when inadmissible.
fn random_term(p: &WeightPattern, ln_a: f64, g: f64) -> Option<f64> {
    let w = p.max_block_weight() as f64;
    let ln_ab = ln_a + p.ln_multinomial_ratio();
    let mut term = 0.0;
    for (v, &f) in p.counts().iter().enumerate().skip(1) {
        if f == 0 {
            continue;
        }
        let ln_c = ln_ab / (w * f as f64) + ln_binomial(p.block_size(), v);
        let x = 1.0 + v as f64 * g - ln_c;
        if x <= 0.0 {
            return None;
        }
        term += -(f as f64) * (x + x.ln());
    }
    Some(term)
}

/// Low-SNR form under random mapping:
/// `Σ_d Σ_f Π_{v: f_v>0} e^{-f_v x_v} / x_v^{f_v}` with `x_v = 1 + vγ - ln C(f_v)` and
/// `C(f_v) = [A(d) B(L, f, d)]^{1/(w f_v)} C(M, v)`.
pub fn low_snr_bound_random(
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
    let g = snr.linear();
    let mut acc = LogSum::new();
    let mut skipped = 0;
    for (d, count) in row.iter().enumerate().take(d_max + 1).skip(d_min) {
        if count.bits() == 0 {
            continue;
        }
        let ln_a = ln_big(count);
        for p in enumerate_patterns(blocks, block_size, d) {
            match random_term(&p, ln_a, g) {
                Some(t) => acc.push(t),
                None => skipped += 1,
            }
        }
    }
    finish(acc, skipped, d_max, n)
}
