use std::collections::BTreeMap;

use super::{BitBlock, SubcodeId, SubcodeKind};
use crate::error::{Error, Result};

/// Size limits for exhaustive codeword enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    pub max_length: usize,
    pub max_free_bits: usize,
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard {
            max_length: 32,
            max_free_bits: 26,
        }
    }
}

impl EnumerationGuard {
    fn check(&self, id: &SubcodeId) -> Result<()> {
        if id.length > self.max_length || id.length > 64 {
            return Err(Error::GuardExceeded(format!(
                "length {} exceeds limit {}",
                id.length, self.max_length
            )));
        }
        if id.length - id.index > self.max_free_bits {
            return Err(Error::GuardExceeded(format!(
                "N - i = {} exceeds limit {}",
                id.length - id.index,
                self.max_free_bits
            )));
        }
        Ok(())
    }
}

/// Row `r` (0-based) of `F_N` packed into a `u64` (bit `c` = column `c`).
fn row_mask(length: usize, r: usize) -> u64 {
    (0..length)
        .filter(|&c| c & r == c)
        .fold(0u64, |acc, c| acc | (1u64 << c))
}

/// Gray-code walk over all codewords of a subcode or polar subcode as packed masks.
#[derive(Debug, Clone)]
pub(crate) struct MaskWalk {
    rows: Vec<u64>,
    current: u64,
    step: u64,
    total: u64,
}

impl MaskWalk {
    pub(crate) fn new(id: &SubcodeId, guard: &EnumerationGuard) -> Result<Self> {
        guard.check(id)?;
        let n = id.length;
        let first_free = match id.kind {
            SubcodeKind::Subcode => id.index - 1,
            SubcodeKind::PolarSubcode => id.index,
        };
        let rows: Vec<u64> = (first_free..n).map(|r| row_mask(n, r)).collect();
        let start = match id.kind {
            SubcodeKind::Subcode => 0,
            SubcodeKind::PolarSubcode => row_mask(n, id.index - 1),
        };
        Ok(MaskWalk {
            total: 1u64 << rows.len(),
            rows,
            current: start,
            step: 0,
        })
    }

    pub(crate) fn len(&self) -> u64 {
        self.total
    }
}

impl Iterator for MaskWalk {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.step >= self.total {
            return None;
        }
        let out = self.current;
        self.step += 1;
        if self.step < self.total {
            // Gray code: flip the row at the lowest set bit of the step counter.
            let flip = self.step.trailing_zeros() as usize;
            self.current ^= self.rows[flip];
        }
        Some(out)
    }
}

/// Stream of codewords of a subcode `C_N^(i)` or polar subcode `D_N^(i)`.
#[derive(Debug, Clone)]
pub struct SubcodeCodewords {
    walk: MaskWalk,
    length: usize,
}

impl SubcodeCodewords {
    /// Total number of codewords the stream will yield.
    pub fn total(&self) -> u64 {
        self.walk.len()
    }
}

impl Iterator for SubcodeCodewords {
    type Item = BitBlock;

    fn next(&mut self) -> Option<BitBlock> {
        let mask = self.walk.next()?;
        let bits = (0..self.length).map(|c| ((mask >> c) & 1) as u8).collect();
        Some(BitBlock(bits))
    }
}

/// Enumerate every codeword of the subcode described by `id`.
pub fn enumerate_polar_subcode(id: &SubcodeId, guard: &EnumerationGuard) -> Result<SubcodeCodewords> {
    Ok(SubcodeCodewords {
        walk: MaskWalk::new(id, guard)?,
        length: id.length,
    })
}

/// Tally block-wise Hamming weight vectors over `blocks` equal blocks by exhaustive enumeration.
pub fn brute_force_split_spectrum(
    id: &SubcodeId,
    blocks: usize,
    guard: &EnumerationGuard,
) -> Result<BTreeMap<Vec<usize>, u64>> {
    if blocks == 0 || !id.length.is_multiple_of(blocks) {
        return Err(Error::invalid(format!(
            "{blocks} blocks do not divide length {}",
            id.length
        )));
    }
    let m = id.length / blocks;
    let block_masks: Vec<u64> = (0..blocks)
        .map(|l| (l * m..(l + 1) * m).fold(0u64, |acc, c| acc | (1u64 << c)))
        .collect();
    let mut tally: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    let mut key = vec![0usize; blocks];
    for mask in MaskWalk::new(id, guard)? {
        for (slot, bm) in key.iter_mut().zip(&block_masks) {
            *slot = (mask & bm).count_ones() as usize;
        }
        match tally.get_mut(&key) {
            Some(count) => *count += 1,
            None => {
                tally.insert(key.clone(), 1);
            }
        }
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::polar::polar_transform;

    fn collect(id: SubcodeId) -> Vec<Vec<u8>> {
        enumerate_polar_subcode(&id, &EnumerationGuard::default())
            .unwrap()
            .map(BitBlock::into_bits)
            .collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(collect(SubcodeId::polar(4, 4).unwrap()), vec![vec![1, 1, 1, 1]]);

        let mut d43 = collect(SubcodeId::polar(4, 3).unwrap());
        d43.sort();
        assert_eq!(d43, vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]]);

        let c21: HashSet<_> = collect(SubcodeId::subcode(2, 1).unwrap()).into_iter().collect();
        assert_eq!(c21.len(), 4);
    }

    #[test]
    fn split_spectrum_examples() {
        let g = EnumerationGuard::default();
        let s = brute_force_split_spectrum(&SubcodeId::polar(4, 3).unwrap(), 2, &g).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(vec![1, 1], 2)]);

        let s = brute_force_split_spectrum(&SubcodeId::polar(4, 4).unwrap(), 2, &g).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![(vec![2, 2], 1)]);

        let s = brute_force_split_spectrum(&SubcodeId::polar(16, 2).unwrap(), 2, &g).unwrap();
        assert_eq!(s[&vec![2, 2]], 384);
    }

    #[test]
    fn guard_rejects_large_sets() {
        let g = EnumerationGuard::default();
        assert!(matches!(
            enumerate_polar_subcode(&SubcodeId::polar(64, 60).unwrap(), &g),
            Err(Error::GuardExceeded(_))
        ));
        assert!(matches!(
            enumerate_polar_subcode(&SubcodeId::polar(32, 5).unwrap(), &g),
            Err(Error::GuardExceeded(_))
        ));
        assert!(brute_force_split_spectrum(&SubcodeId::polar(16, 3).unwrap(), 3, &g).is_err());
    }

    #[test]
    fn sizes_and_disjoint_union() {
        for n in [2usize, 4, 8, 16] {
            for i in 1..=n {
                let d: HashSet<_> = collect(SubcodeId::polar(n, i).unwrap()).into_iter().collect();
                let c: HashSet<_> = collect(SubcodeId::subcode(n, i).unwrap()).into_iter().collect();
                assert_eq!(d.len(), 1 << (n - i));
                assert_eq!(c.len(), 1 << (n - i + 1));
                let next: HashSet<Vec<u8>> = if i < n {
                    collect(SubcodeId::subcode(n, i + 1).unwrap())
                        .into_iter()
                        .collect()
                } else {
                    std::iter::once(vec![0u8; n]).collect()
                };
                assert!(d.is_disjoint(&next));
                let union: HashSet<_> = d.union(&next).cloned().collect();
                assert_eq!(union, c, "N={n} i={i}");
                let min_w = d.iter().map(|w| w.iter().filter(|&&b| b == 1).count()).min();
                assert_eq!(min_w, Some(1usize << (i - 1).count_ones()));
            }
        }
    }

    #[test]
    fn enumerated_words_are_codewords() {
        // every member of D_N^(i) has a preimage with u_1..u_{i-1} = 0 and u_i = 1
        for i in 1..=8 {
            for w in collect(SubcodeId::polar(8, i).unwrap()) {
                let mut u = w.clone();
                polar_transform(&mut u);
                assert!(u[..i - 1].iter().all(|&b| b == 0));
                assert_eq!(u[i - 1], 1);
            }
        }
    }
}
