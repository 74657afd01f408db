use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::combinatorics::{binomial, ln_binomial, ln_factorial};
use crate::error::{Error, Result};

/// How the `d` nonzero bits of a codeword spread over `L` fading blocks of `M` bits:
/// `counts[v]` blocks carry weight `v`, for `v = 0..=w` with `w = min(d, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightPattern {
    blocks: usize,
    block_size: usize,
    weight: usize,
    counts: Vec<usize>,
}

impl WeightPattern {
    pub fn new(blocks: usize, block_size: usize, counts: Vec<usize>) -> Result<Self> {
        if blocks == 0 || block_size == 0 {
            return Err(Error::invalid("L and M must be positive"));
        }
        let weight: usize = counts.iter().enumerate().map(|(v, f)| v * f).sum();
        if counts.iter().sum::<usize>() != blocks {
            return Err(Error::invalid(format!("pattern counts do not sum to L={blocks}")));
        }
        let w = weight.min(block_size);
        if counts.len() > w + 1 && counts[w + 1..].iter().any(|&f| f > 0) {
            return Err(Error::invalid(format!(
                "pattern puts more than {w} bits in one block"
            )));
        }
        let mut counts = counts;
        counts.resize(w + 1, 0);
        Ok(WeightPattern {
            blocks,
            block_size,
            weight,
            counts,
        })
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// `f_0, ..., f_w`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Largest per-block weight `w = min(d, M)`.
    pub fn max_block_weight(&self) -> usize {
        self.counts.len() - 1
    }

    /// Number of blocks carrying nonzero weight, `F = L - f_0`.
    pub fn nonzero_blocks(&self) -> usize {
        self.blocks - self.counts[0]
    }

    /// `ln` of the multinomial `L! / Π f_v!` over `C(N, d)`.
    pub fn ln_multinomial_ratio(&self) -> f64 {
        let n = self.blocks * self.block_size;
        ln_factorial(self.blocks)
            - self.counts.iter().map(|&f| ln_factorial(f)).sum::<f64>()
            - ln_binomial(n, self.weight)
    }
}

/// All weight patterns of a weight-`d` word over `L` blocks of size `M`.
///
/// Order: `F` ascending from `ceil(d/M)`, then `f_1, f_2, ..., f_w` each ascending, where
/// `f_v` ranges up to `min(F - Σ_{r<v} f_r, (d - Σ_{r<v} r f_r) / v)`.
pub fn enumerate_patterns(blocks: usize, block_size: usize, weight: usize) -> Vec<WeightPattern> {
    let mut out = Vec::new();
    if blocks == 0 || block_size == 0 || weight > blocks * block_size {
        return out;
    }
    if weight == 0 {
        out.push(WeightPattern {
            blocks,
            block_size,
            weight,
            counts: vec![blocks],
        });
        return out;
    }
    let w = weight.min(block_size);
    let f_lo = weight.div_ceil(block_size);
    let f_hi = weight.min(blocks);
    let mut counts = vec![0usize; w + 1];
    for nonzero in f_lo..=f_hi {
        counts[0] = blocks - nonzero;
        descend(1, w, nonzero, weight, &mut counts, &mut |c| {
            out.push(WeightPattern {
                blocks,
                block_size,
                weight,
                counts: c.to_vec(),
            })
        });
    }
    out
}

fn descend(
    v: usize,
    w: usize,
    blocks_left: usize,
    weight_left: usize,
    counts: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if v > w {
        if blocks_left == 0 && weight_left == 0 {
            emit(counts);
        }
        return;
    }
    let top = blocks_left.min(weight_left / v);
    for f in 0..=top {
        counts[v] = f;
        descend(v + 1, w, blocks_left - f, weight_left - v * f, counts, emit);
    }
    counts[v] = 0;
}

/// `ln P_d(f)`: probability that a uniform interleaver realizes pattern `f`.
pub fn ln_pattern_probability(p: &WeightPattern) -> f64 {
    let ln_blocks: f64 = p
        .counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &f)| f > 0)
        .map(|(v, &f)| f as f64 * ln_binomial(p.block_size, v))
        .sum();
    ln_blocks + p.ln_multinomial_ratio()
}

pub fn pattern_probability(p: &WeightPattern) -> f64 {
    ln_pattern_probability(p).exp()
}

/// Exact rational `P_d(f)`; meant for small sizes and tests.
pub fn pattern_probability_exact(p: &WeightPattern) -> BigRational {
    let n = p.blocks * p.block_size;
    let mut num = BigInt::from(factorial(p.blocks));
    for (v, &f) in p.counts.iter().enumerate().skip(1) {
        num *= BigInt::from(binomial(p.block_size, v).pow(f as u32));
    }
    let mut den = BigInt::from(binomial(n, p.weight));
    for &f in &p.counts {
        den *= BigInt::from(factorial(f));
    }
    BigRational::new(num, den)
}

fn factorial(n: usize) -> num_bigint::BigUint {
    (1..=n).fold(num_bigint::BigUint::one(), |acc, k| acc * k)
}
