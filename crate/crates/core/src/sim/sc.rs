//! Successive cancellation decoding for `x = u F_N` (natural order, no bit reversal).
//!
//! With `F_N = [[F, 0], [F, F]]` a node of size `2h` receives `x = (a ⊕ b, b)` where
//! `a` and `b` are the codewords of its left and right children, so the left child sees
//! `f(λ_left, λ_right)` and the right child `λ_right + (1 - 2a) λ_left`. The decoder walks the
//! leaves in order; each phase refreshes only the part of the tree that changed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polar::{BitBlock, CodeSpec};

/// Check-node update rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckNode {
    /// `2 atanh(tanh(a/2) tanh(b/2))`, evaluated in sign-magnitude form.
    #[default]
    Exact,
    MinSum,
}

impl CheckNode {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        let (x, y) = (a.abs(), b.abs());
        let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
        let m = x.min(y);
        match self {
            CheckNode::MinSum => sign * m,
            CheckNode::Exact => {
                let diff = (x - y).abs();
                let corr = (-(x + y)).exp().ln_1p() - if diff.is_nan() { 0.0 } else { (-diff).exp().ln_1p() };
                sign * (m + corr).max(0.0)
            }
        }
    }
}

#[inline]
fn bit_node(right: f64, left: f64, a: u8) -> f64 {
    if a == 0 {
        right + left
    } else {
        right - left
    }
}

/// Tree state of one decoding path: LLRs and partial sums for every depth.
#[derive(Debug, Clone)]
pub(crate) struct ScState {
    n: u32,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<u8>>,
}

impl ScState {
    pub(crate) fn new(length: usize) -> Self {
        let n = length.trailing_zeros();
        ScState {
            n,
            alpha: (0..=n).map(|d| vec![0.0; length >> d]).collect(),
            beta: (0..=n).map(|d| vec![0; length >> d]).collect(),
        }
    }

    pub(crate) fn load(&mut self, llrs: &[f64]) {
        self.alpha[0].copy_from_slice(llrs);
    }

    /// LLR of `u_{phase+1}` given the committed bits of all earlier phases.
    pub(crate) fn leaf_llr(&mut self, phase: usize, rule: CheckNode) -> f64 {
        let n = self.n as usize;
        let mut start = 1;
        if phase > 0 {
            let d0 = n - phase.trailing_zeros() as usize;
            let h = self.alpha[d0].len();
            let (upper, lower) = self.alpha.split_at_mut(d0);
            let parent = &upper[d0 - 1];
            let left_bits = &self.beta[d0 - 1];
            for (i, out) in lower[0].iter_mut().enumerate() {
                *out = bit_node(parent[i + h], parent[i], left_bits[i]);
            }
            start = d0 + 1;
        }
        for d in start..=n {
            let h = self.alpha[d].len();
            let (upper, lower) = self.alpha.split_at_mut(d);
            let parent = &upper[d - 1];
            for (i, out) in lower[0].iter_mut().enumerate() {
                *out = rule.apply(parent[i], parent[i + h]);
            }
        }
        self.alpha[n][0]
    }

    /// Fix `u_{phase+1} = bit` and propagate partial sums upward.
    pub(crate) fn commit(&mut self, phase: usize, bit: u8) {
        let n = self.n as usize;
        self.beta[n][0] = bit;
        let mut d = n;
        while d > 0 {
            let h = 1usize << (n - d);
            let (upper, lower) = self.beta.split_at_mut(d);
            let parent = &mut upper[d - 1];
            let child = &lower[0];
            if (phase >> (n - d)) & 1 == 0 {
                parent[..h].copy_from_slice(&child[..h]);
                break;
            }
            for i in 0..h {
                parent[i] ^= child[i];
            }
            parent[h..2 * h].copy_from_slice(&child[..h]);
            d -= 1;
        }
    }

    /// Re-encoded codeword once every phase has been committed.
    pub(crate) fn codeword(&self) -> &[u8] {
        &self.beta[0]
    }
}

/// Decoder output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub info_bits: Vec<u8>,
    pub codeword: BitBlock,
}

pub(crate) fn check_llrs(spec: &CodeSpec, llrs: &[f64]) -> Result<()> {
    if llrs.len() != spec.length() {
        return Err(Error::invalid(format!(
            "expected {} LLRs, got {}",
            spec.length(),
            llrs.len()
        )));
    }
    Ok(())
}

/// Reusable SC decoder for one code.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    template: Vec<Option<u8>>,
    info_set: Vec<usize>,
    rule: CheckNode,
    state: ScState,
}

impl ScDecoder {
    pub fn new(spec: &CodeSpec, rule: CheckNode) -> Self {
        ScDecoder {
            template: spec.frozen_template(),
            info_set: spec.info_set().to_vec(),
            rule,
            state: ScState::new(spec.length()),
        }
    }

    pub fn rule(&self) -> CheckNode {
        self.rule
    }

    /// Hard-decision SC: `u_i = 1` iff its LLR is negative; frozen positions are forced.
    pub fn decode(&mut self, llrs: &[f64]) -> Decoded {
        self.state.load(llrs);
        let mut u = vec![0u8; self.template.len()];
        for (phase, frozen) in self.template.iter().enumerate() {
            let l = self.state.leaf_llr(phase, self.rule);
            let bit = frozen.unwrap_or((l < 0.0) as u8);
            u[phase] = bit;
            self.state.commit(phase, bit);
        }
        Decoded {
            info_bits: self.info_set.iter().map(|&i| u[i - 1]).collect(),
            codeword: BitBlock::new(self.state.codeword().to_vec()).expect("bits"),
        }
    }

    /// Genie-aided pass: every phase is committed to the true `u`, and the leaf LLR seen by
    /// each polarized channel is written to `leaf`.
    pub fn genie_leaf_llrs(&mut self, llrs: &[f64], u_true: &[u8], leaf: &mut [f64]) {
        self.state.load(llrs);
        for (phase, &bit) in u_true.iter().enumerate() {
            leaf[phase] = self.state.leaf_llr(phase, self.rule);
            self.state.commit(phase, bit);
        }
    }
}

/// One-shot SC decoding with the exact check-node rule.
pub fn sc_decode(spec: &CodeSpec, llrs: &[f64]) -> Result<Decoded> {
    sc_decode_with(spec, llrs, CheckNode::Exact)
}

pub fn sc_decode_with(spec: &CodeSpec, llrs: &[f64], rule: CheckNode) -> Result<Decoded> {
    check_llrs(spec, llrs)?;
    Ok(ScDecoder::new(spec, rule).decode(llrs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::encode;

    fn noiseless(x: &BitBlock) -> Vec<f64> {
        x.bits()
            .iter()
            .map(|&b| if b == 1 { -10.0 } else { 10.0 })
            .collect()
    }

    #[test]
    fn check_node_rules() {
        for (a, b) in [(1.5f64, -0.3f64), (-4.0, -2.0), (0.0, 3.0), (20.0, 21.0)] {
            // ln((1 + e^{a+b}) / (e^a + e^b)) in log-sum-exp form
            let lse = |u: f64, v: f64| u.max(v) + (-(u - v).abs()).exp().ln_1p();
            let exact = lse(0.0, a + b) - lse(a, b);
            assert!((CheckNode::Exact.apply(a, b) - exact).abs() < 1e-9, "{a} {b}");
            assert_eq!(CheckNode::MinSum.apply(a, b).abs(), a.abs().min(b.abs()));
        }
        // stays finite where the tanh form saturates
        assert!((CheckNode::Exact.apply(800.0, -900.0) + 800.0).abs() < 1e-9);
    }

    #[test]
    fn noiseless_recovery() {
        let spec = CodeSpec::new(16, [8, 12, 14, 15, 16, 4, 6, 7]).unwrap();
        for m in 0..256u32 {
            let info: Vec<u8> = (0..8).map(|k| ((m >> k) & 1) as u8).collect();
            let x = encode(&spec, &info).unwrap();
            let out = sc_decode(&spec, &noiseless(&x)).unwrap();
            assert_eq!(out.info_bits, info);
            assert_eq!(out.codeword, x);
        }
    }

    #[test]
    fn all_frozen_code_returns_frozen_values() {
        let spec = CodeSpec::new(4, Vec::<usize>::new())
            .unwrap()
            .with_frozen_values(vec![1, 0, 1, 1])
            .unwrap();
        let out = sc_decode(&spec, &[5.0, -1.0, 2.0, 0.3]).unwrap();
        assert!(out.info_bits.is_empty());
        assert_eq!(out.codeword, encode(&spec, &[]).unwrap());
    }

    #[test]
    fn single_flip_beyond_correction_radius() {
        // N=8, K=4, info set {4,6,7,8}; d_min of this code is 2, so a confident flip of
        // position 8 with everything else weak defeats the decoder.
        let spec = CodeSpec::new(8, [4, 6, 7, 8]).unwrap();
        let x = encode(&spec, &[0, 0, 0, 0]).unwrap();
        let mut llrs: Vec<f64> = noiseless(&x).iter().map(|l| l / 10.0).collect();
        llrs[7] = -5.0;
        let out = sc_decode(&spec, &llrs).unwrap();
        assert_ne!(out.info_bits, vec![0, 0, 0, 0]);
        // one bit less confident and it is corrected
        llrs[7] = -0.5;
        assert_eq!(sc_decode(&spec, &llrs).unwrap().info_bits, vec![0, 0, 0, 0]);
    }

    #[test]
    fn genie_llrs_match_decoder_on_correct_paths() {
        let spec = CodeSpec::new(8, 1..=8).unwrap();
        let llrs = [1.2, -0.4, 2.2, 0.9, -1.7, 0.3, 0.8, 1.1];
        let mut dec = ScDecoder::new(&spec, CheckNode::Exact);
        let out = dec.decode(&llrs);
        let mut u = out.codeword.bits().to_vec();
        crate::polar::polar_transform(&mut u);
        let mut leaf = vec![0.0; 8];
        dec.genie_leaf_llrs(&llrs, &u, &mut leaf);
        for (l, &b) in leaf.iter().zip(&u) {
            assert_eq!(*l < 0.0, b == 1);
        }
        assert!(sc_decode(&spec, &llrs[..4]).is_err());
    }
}
