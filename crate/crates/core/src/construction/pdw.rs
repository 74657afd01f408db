//! Polarized diversity weight: the dominant log-domain term of a channel's union bound at
//! its minimum weight.

use serde::{Deserialize, Serialize};

use crate::bounds::{enumerate_patterns, ln_pattern_probability, SnrPoint};
use crate::combinatorics::{ln_big, LogSum};
use crate::error::{Error, Result};
use crate::spectrum::{SpectrumTable, SplitSpectrumTable};

/// How the terms at `d_min` are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdwVariant {
    /// Largest single term.
    #[default]
    Max,
    /// Log of the sum of all terms (experimental).
    FullSum,
}

fn combine(terms: impl Iterator<Item = f64>, variant: PdwVariant) -> Option<f64> {
    match variant {
        PdwVariant::Max => terms.fold(None, |m: Option<f64>, t| Some(m.map_or(t, |m| m.max(t)))),
        PdwVariant::FullSum => {
            let mut acc = LogSum::new();
            terms.for_each(|t| acc.push(t));
            (!acc.is_empty()).then(|| acc.value())
        }
    }
}

/// PDW under block mapping with two fading blocks:
/// `max_{j+k=d_min, A(j,k)>0} ln A(j,k) - d_min γ`.
pub fn pdw_block(split: &SplitSpectrumTable, i: usize, design_snr: SnrPoint) -> Result<f64> {
    pdw_block_with(split, i, design_snr, PdwVariant::Max)
}

pub fn pdw_block_with(
    split: &SplitSpectrumTable,
    i: usize,
    design_snr: SnrPoint,
    variant: PdwVariant,
) -> Result<f64> {
    let row = split.polar_row(i)?;
    let d_min = split.d_min(i)?;
    let shift = d_min as f64 * design_snr.linear();
    let terms = row
        .iter_nonzero()
        .filter(|&(j, k, _)| j + k == d_min)
        .map(|(_, _, a)| ln_big(a));
    combine(terms, variant)
        .map(|t| t - shift)
        .ok_or_else(|| Error::tripwire(format!("row {i} has no codeword at its minimum weight")))
}

/// Single-block PDW `ln A(d_min) - d_min γ`.
pub fn pdw_single(spectrum: &SpectrumTable, i: usize, design_snr: SnrPoint) -> Result<f64> {
    let d_min = spectrum.d_min(i)?;
    let a = spectrum.polar(i, d_min)?;
    Ok(ln_big(&a) - d_min as f64 * design_snr.linear())
}

/// PDW under random mapping over `blocks` blocks of `block_size` bits: the largest
/// `ln A(d_min) + ln P_{d_min}(f) - d_min γ` over weight patterns `f`.
pub fn pdw_random(
    spectrum: &SpectrumTable,
    i: usize,
    blocks: usize,
    block_size: usize,
    design_snr: SnrPoint,
) -> Result<f64> {
    pdw_random_with(spectrum, i, blocks, block_size, design_snr, PdwVariant::Max)
}

pub fn pdw_random_with(
    spectrum: &SpectrumTable,
    i: usize,
    blocks: usize,
    block_size: usize,
    design_snr: SnrPoint,
    variant: PdwVariant,
) -> Result<f64> {
    crate::bounds::check_blocks(spectrum.length(), blocks, block_size)?;
    let d_min = spectrum.d_min(i)?;
    let ln_a = ln_big(&spectrum.polar(i, d_min)?);
    let terms = enumerate_patterns(blocks, block_size, d_min)
        .into_iter()
        .map(|p| ln_pattern_probability(&p));
    combine(terms, variant)
        .map(|t| ln_a + t - d_min as f64 * design_snr.linear())
        .ok_or_else(|| Error::tripwire(format!("no weight pattern for d={d_min}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumLibrary;

    fn g(x: f64) -> SnrPoint {
        SnrPoint::new(x).unwrap()
    }

    #[test]
    fn block_examples() {
        let lib = SpectrumLibrary::build(4).unwrap();
        let s16 = lib.split(16).unwrap();
        assert!((pdw_block(s16, 16, g(1.0)).unwrap() + 16.0).abs() < 1e-12);
        assert!((pdw_block(s16, 9, g(1.0)).unwrap() - (8f64.ln() - 2.0)).abs() < 1e-12);
        let s4 = lib.split(4).unwrap();
        assert!((pdw_block(s4, 3, g(0.5)).unwrap() - (2f64.ln() - 1.0)).abs() < 1e-12);
        assert!(pdw_block(s16, 17, g(1.0)).is_err());
        // row 1: (1,0) and (0,1) both have 8 words
        assert!((pdw_block(s16, 1, g(1.0)).unwrap() - (8f64.ln() - 1.0)).abs() < 1e-12);
        let full = pdw_block_with(s16, 1, g(1.0), PdwVariant::FullSum).unwrap();
        assert!((full - (16f64.ln() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn random_examples() {
        let lib = SpectrumLibrary::build(4).unwrap();
        let t4 = lib.spectrum(4).unwrap();
        assert!((pdw_random(t4, 4, 2, 2, g(1.0)).unwrap() + 4.0).abs() < 1e-12);

        // N=16, L=2, M=8, i=9: patterns (f0,f1,f2) = (1,0,1) and (0,2,0)
        let t16 = lib.spectrum(16).unwrap();
        let c = |n: f64, k: f64| -> f64 {
            let mut r = 1.0;
            for j in 0..k as usize {
                r *= (n - j as f64) / (j as f64 + 1.0);
            }
            r
        };
        let one_block = 2.0 * c(8.0, 2.0) / c(16.0, 2.0);
        let spread = 1.0 * c(8.0, 1.0).powi(2) / c(16.0, 2.0);
        let want = 8f64.ln() + one_block.max(spread).ln() - 2.0;
        assert!((pdw_random(t16, 9, 2, 8, g(1.0)).unwrap() - want).abs() < 1e-12);
        assert!(pdw_random(t16, 9, 3, 5, g(1.0)).is_err());
    }

    #[test]
    fn single_block_forms_agree() {
        let lib = SpectrumLibrary::build(5).unwrap();
        let t = lib.spectrum(32).unwrap();
        for i in 1..=32 {
            let a = pdw_single(t, i, g(0.7)).unwrap();
            let b = pdw_random(t, i, 1, 32, g(0.7)).unwrap();
            assert!((a - b).abs() < 1e-12, "i={i}");
        }
    }
}
