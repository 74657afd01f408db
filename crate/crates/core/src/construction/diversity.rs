//! Full-diversity and product-distance diagnostics at each channel's minimum weight.

use serde::{Deserialize, Serialize};

use crate::bounds::{check_blocks, enumerate_patterns};
use crate::error::Result;
use crate::spectrum::{SpectrumTable, SplitSpectrumTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDiversity {
    pub index: usize,
    pub d_min: usize,
    /// Fewest faded blocks any minimum-weight word touches.
    pub diversity_order: usize,
    /// Largest product of nonzero block weights over the minimum-weight partitions.
    pub product_distance: f64,
    /// Set when `diversity_order < L`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    pub blocks: usize,
    pub channels: Vec<ChannelDiversity>,
}

impl DiversityReport {
    pub fn get(&self, index: usize) -> Option<&ChannelDiversity> {
        self.channels.iter().find(|c| c.index == index)
    }

    pub fn flagged(&self) -> Vec<usize> {
        self.channels
            .iter()
            .filter(|c| c.flagged)
            .map(|c| c.index)
            .collect()
    }
}

fn summarize(
    index: usize,
    d_min: usize,
    blocks: usize,
    partitions: impl Iterator<Item = Vec<usize>>,
) -> ChannelDiversity {
    let mut order = blocks;
    let mut best = 0.0f64;
    for part in partitions {
        let nonzero: Vec<usize> = part.into_iter().filter(|&x| x > 0).collect();
        order = order.min(nonzero.len());
        best = best.max(nonzero.iter().map(|&x| x as f64).product());
    }
    ChannelDiversity {
        index,
        d_min,
        diversity_order: order,
        product_distance: best,
        flagged: order < blocks,
    }
}

/// Exact report for block mapping over two blocks.
pub fn diversity_report_block(split: &SplitSpectrumTable, channels: &[usize]) -> Result<DiversityReport> {
    let channels = channels
        .iter()
        .map(|&i| {
            let d_min = split.d_min(i)?;
            let row = split.polar_row(i)?;
            let parts = row
                .iter_nonzero()
                .filter(|&(j, k, _)| j + k == d_min)
                .map(|(j, k, _)| vec![j, k]);
            Ok(summarize(i, d_min, 2, parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiversityReport { blocks: 2, channels })
}

/// Report under random mapping, from the support of the weight-pattern distribution at
/// `d_min`. Any pattern the interleaver can realize counts.
pub fn diversity_report_random(
    spectrum: &SpectrumTable,
    blocks: usize,
    block_size: usize,
    channels: &[usize],
) -> Result<DiversityReport> {
    check_blocks(spectrum.length(), blocks, block_size)?;
    let channels = channels
        .iter()
        .map(|&i| {
            let d_min = spectrum.d_min(i)?;
            let parts = enumerate_patterns(blocks, block_size, d_min)
                .into_iter()
                .map(|p| {
                    p.counts()
                        .iter()
                        .enumerate()
                        .flat_map(|(v, &f)| std::iter::repeat_n(v, f))
                        .collect::<Vec<_>>()
                });
            Ok(summarize(i, d_min, blocks, parts))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiversityReport { blocks, channels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumLibrary;

    #[test]
    fn block_examples() {
        let lib = SpectrumLibrary::build(5).unwrap();
        let s = lib.split(16).unwrap();
        let all: Vec<usize> = (1..=16).collect();
        let r = diversity_report_block(s, &all).unwrap();
        let c9 = r.get(9).unwrap();
        assert_eq!(
            (c9.diversity_order, c9.product_distance, c9.flagged),
            (2, 1.0, false)
        );
        let c1 = r.get(1).unwrap();
        assert_eq!((c1.diversity_order, c1.flagged), (1, true));
        assert_eq!(r.get(16).unwrap().product_distance, 64.0);
        for n in [8usize, 16, 32] {
            let s = lib.split(n).unwrap();
            let upper: Vec<usize> = (n / 2 + 1..=n).collect();
            let r = diversity_report_block(s, &upper).unwrap();
            assert!(r.channels.iter().all(|c| c.diversity_order == 2));
            assert!(r.flagged().is_empty());
        }
    }

    #[test]
    fn random_support() {
        let lib = SpectrumLibrary::build(4).unwrap();
        let t = lib.spectrum(16).unwrap();
        let r = diversity_report_random(t, 4, 4, &[1, 16]).unwrap();
        // weight 1 lands in one block
        assert_eq!(r.get(1).unwrap().diversity_order, 1);
        // weight 16 fills every block: pattern f_4 = 4
        let c = r.get(16).unwrap();
        assert_eq!((c.diversity_order, c.product_distance), (4, 256.0));
        assert!(diversity_report_random(t, 3, 4, &[1]).is_err());
    }
}
