//! Polar transform and subcode machinery.
//!
//! The generator matrix is `F_N = F_2^{⊗n}` with kernel `[[1, 0], [1, 1]]`
//! and **no bit-reversal permutation**. Many references (including Arıkan's
//! original construction) apply `B_N F_N`; here the codeword is always
//! `x = u F_N`, which is also the form used by 5G NR. Channel and row indices
//! are 1-based in every public interface.

mod enumerate;

pub use enumerate::{
    brute_force_split_spectrum, enumerate_polar_subcode, EnumerationGuard, SubcodeCodewords,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `(N, K)` polar code: information set plus frozen bit values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    length: usize,
    info_set: Vec<usize>,
    frozen_values: Vec<u8>,
}

impl CodeSpec {
    /// Code with all frozen bits set to zero. `info_set` holds 1-based indices in any order.
    pub fn new(length: usize, info_set: impl IntoIterator<Item = usize>) -> Result<Self> {
        if !length.is_power_of_two() || length < 2 {
            return Err(Error::invalid(format!(
                "block length {length} is not a power of two >= 2"
            )));
        }
        let mut info: Vec<usize> = info_set.into_iter().collect();
        info.sort_unstable();
        let before = info.len();
        info.dedup();
        if info.len() != before {
            return Err(Error::invalid("information set contains duplicates"));
        }
        if let Some(&bad) = info.iter().find(|&&i| i == 0 || i > length) {
            return Err(Error::invalid(format!(
                "information index {bad} outside 1..={length}"
            )));
        }
        let frozen = length - info.len();
        Ok(CodeSpec {
            length,
            info_set: info,
            frozen_values: vec![0; frozen],
        })
    }

    /// Replace the frozen bit values; `values` follows ascending frozen index order.
    pub fn with_frozen_values(mut self, values: Vec<u8>) -> Result<Self> {
        if values.len() != self.frozen_values.len() {
            return Err(Error::invalid(format!(
                "expected {} frozen values, got {}",
                self.frozen_values.len(),
                values.len()
            )));
        }
        if values.iter().any(|&b| b > 1) {
            return Err(Error::invalid("frozen values must be bits"));
        }
        self.frozen_values = values;
        Ok(self)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn exponent(&self) -> u32 {
        self.length.trailing_zeros()
    }

    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.length as f64
    }

    /// Sorted 1-based information indices.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// Sorted 1-based frozen indices.
    pub fn frozen_set(&self) -> Vec<usize> {
        let mut info = self.info_set.iter().peekable();
        (1..=self.length)
            .filter(|i| {
                if info.peek() == Some(&i) {
                    info.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }

    pub fn frozen_values(&self) -> &[u8] {
        &self.frozen_values
    }

    /// Per-position source template in 0-based order: `Some(bit)` for frozen positions,
    /// `None` for information positions.
    pub(crate) fn frozen_template(&self) -> Vec<Option<u8>> {
        let mut template = vec![None; self.length];
        for (&idx, &v) in self.frozen_set().iter().zip(&self.frozen_values) {
            template[idx - 1] = Some(v);
        }
        template
    }

    /// Build the source block `u`: info bits at information positions, frozen values elsewhere.
    pub fn source_block(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        if info_bits.len() != self.k() {
            return Err(Error::invalid(format!(
                "expected {} information bits, got {}",
                self.k(),
                info_bits.len()
            )));
        }
        let mut u = vec![0u8; self.length];
        for (&idx, &b) in self.info_set.iter().zip(info_bits) {
            u[idx - 1] = b & 1;
        }
        for (&idx, &b) in self.frozen_set().iter().zip(&self.frozen_values) {
            u[idx - 1] = b;
        }
        Ok(u)
    }
}

/// A length-N binary vector (codeword or source block).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitBlock(Vec<u8>);

impl BitBlock {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("bit block entries must be 0 or 1"));
        }
        Ok(BitBlock(bits))
    }

    pub fn zeros(len: usize) -> Self {
        BitBlock(vec![0; len])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Hamming weight of each of `blocks` equal contiguous blocks.
    pub fn block_weights(&self, blocks: usize) -> Result<Vec<usize>> {
        if blocks == 0 || !self.0.len().is_multiple_of(blocks) {
            return Err(Error::invalid(format!(
                "{blocks} blocks do not divide length {}",
                self.0.len()
            )));
        }
        let m = self.0.len() / blocks;
        Ok(self
            .0
            .chunks(m)
            .map(|c| c.iter().filter(|&&b| b == 1).count())
            .collect())
    }
}

impl From<BitBlock> for Vec<u8> {
    fn from(b: BitBlock) -> Self {
        b.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubcodeKind {
    /// `C_N^(i)`: all codewords generated by rows `i..=N`.
    Subcode,
    /// `D_N^(i)`: the coset of `C_N^(i+1)` with `u_i = 1`.
    PolarSubcode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcodeId {
    pub length: usize,
    pub index: usize,
    pub kind: SubcodeKind,
}

impl SubcodeId {
    pub fn new(length: usize, index: usize, kind: SubcodeKind) -> Result<Self> {
        if !length.is_power_of_two() || length < 2 {
            return Err(Error::invalid(format!("length {length} is not a power of two")));
        }
        if index == 0 || index > length {
            return Err(Error::invalid(format!("row index {index} outside 1..={length}")));
        }
        Ok(SubcodeId { length, index, kind })
    }

    pub fn subcode(length: usize, index: usize) -> Result<Self> {
        Self::new(length, index, SubcodeKind::Subcode)
    }

    pub fn polar(length: usize, index: usize) -> Result<Self> {
        Self::new(length, index, SubcodeKind::PolarSubcode)
    }

    /// Number of source bits left free when enumerating this set.
    pub fn free_bits(&self) -> usize {
        match self.kind {
            SubcodeKind::Subcode => self.length - self.index + 1,
            SubcodeKind::PolarSubcode => self.length - self.index,
        }
    }
}

/// In-place `x = u F_N` over GF(2). The transform is its own inverse.
pub fn polar_transform(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut stride = 1;
    while stride < n {
        for block in (0..n).step_by(2 * stride) {
            for j in block..block + stride {
                bits[j] ^= bits[j + stride];
            }
        }
        stride *= 2;
    }
}

/// Encode `info_bits` (length K) into a codeword of length N.
pub fn encode(spec: &CodeSpec, info_bits: &[u8]) -> Result<BitBlock> {
    let mut u = spec.source_block(info_bits)?;
    polar_transform(&mut u);
    Ok(BitBlock(u))
}

/// Row `index` (1-based) of `F_N` as a bit vector.
pub fn generator_row(length: usize, index: usize) -> Vec<u8> {
    let r = index - 1;
    (0..length).map(|c| u8::from(c & r == c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `F_N` by explicit Kronecker expansion, independent of the butterfly.
    fn kronecker_matrix(n: usize) -> Vec<Vec<u8>> {
        let mut m = vec![vec![1u8]];
        while m.len() < n {
            let s = m.len();
            let mut next = vec![vec![0u8; 2 * s]; 2 * s];
            for r in 0..s {
                for c in 0..s {
                    next[r][c] = m[r][c];
                    next[r + s][c] = m[r][c];
                    next[r + s][c + s] = m[r][c];
                }
            }
            m = next;
        }
        m
    }

    #[test]
    fn encode_small_examples() {
        let spec = CodeSpec::new(2, [2]).unwrap();
        assert_eq!(encode(&spec, &[1]).unwrap().bits(), &[1, 1]);

        let spec = CodeSpec::new(4, [4]).unwrap();
        assert_eq!(encode(&spec, &[1]).unwrap().bits(), &[1, 1, 1, 1]);

        let full = CodeSpec::new(4, 1..=4).unwrap();
        assert_eq!(encode(&full, &[0, 0, 1, 0]).unwrap().bits(), &[1, 0, 1, 0]);
    }

    #[test]
    fn butterfly_matches_kronecker_expansion() {
        for n in [2usize, 4, 8, 16, 32] {
            let f = kronecker_matrix(n);
            for r in 0..n {
                let mut u = vec![0u8; n];
                u[r] = 1;
                polar_transform(&mut u);
                assert_eq!(u, f[r], "row {r} of F_{n}");
                assert_eq!(generator_row(n, r + 1), f[r]);
            }
        }
    }

    #[test]
    fn encode_rejects_wrong_length() {
        let spec = CodeSpec::new(8, [6, 7, 8]).unwrap();
        assert!(matches!(encode(&spec, &[1, 0]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn code_spec_validation() {
        assert!(CodeSpec::new(6, [1]).is_err());
        assert!(CodeSpec::new(8, [0]).is_err());
        assert!(CodeSpec::new(8, [9]).is_err());
        assert!(CodeSpec::new(8, [3, 3]).is_err());
        let spec = CodeSpec::new(8, [8, 4, 6]).unwrap();
        assert_eq!(spec.info_set(), &[4, 6, 8]);
        assert_eq!(spec.frozen_set(), vec![1, 2, 3, 5, 7]);
    }

    #[test]
    fn nonzero_frozen_values_are_placed() {
        let spec = CodeSpec::new(4, [4])
            .unwrap()
            .with_frozen_values(vec![1, 0, 0])
            .unwrap();
        assert_eq!(spec.source_block(&[0]).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(encode(&spec, &[0]).unwrap().bits(), &[1, 0, 0, 0]);
    }

    #[test]
    fn block_weights_split_evenly() {
        let b = BitBlock::new(vec![1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(b.block_weights(2).unwrap(), vec![3, 1]);
        assert_eq!(b.block_weights(4).unwrap(), vec![1, 2, 0, 1]);
        assert!(b.block_weights(3).is_err());
    }
}
