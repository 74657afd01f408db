//! Exact and log-domain binomial helpers shared by the spectrum engine and the bounds.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// Memoized Pascal triangle of exact binomial coefficients `C(n, k)` for `n <= max_n`.
#[derive(Debug, Clone)]
pub struct Binomials {
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`; zero when `k > n`. Panics if `n` exceeds the memoized range.
    pub fn get(&self, n: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.rows[n][k]
    }
}

/// Exact `C(n, k)` without memoization.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// `ln n!`. Small arguments use a direct product, which is accurate to a few ulps where
/// the log-gamma route loses about `1e-13` to cancellation.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 170 {
        (2..=n).map(|k| k as f64).product::<f64>().ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k <= 64 {
        return (0..k).map(|t| ((n - t) as f64 / (t + 1) as f64).ln()).sum();
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Natural log of an arbitrary-precision count; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit mantissa");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Deterministic log-sum-exp over a fixed sequence of log-domain terms.
///
/// Terms are shifted by their maximum and reduced with a pairwise tree in
/// insertion order, so the result does not depend on how the terms were produced.
#[derive(Debug, Default, Clone)]
pub struct LogSum {
    terms: Vec<f64>,
}

impl LogSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, ln_term: f64) {
        if ln_term > f64::NEG_INFINITY {
            self.terms.push(ln_term);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> f64 {
        let max = self.terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        if max == f64::INFINITY {
            return f64::INFINITY;
        }
        let mut level: Vec<f64> = self.terms.iter().map(|t| (t - max).exp()).collect();
        while level.len() > 1 {
            level = level.chunks(2).map(|pair| pair.iter().sum::<f64>()).collect();
        }
        max + level[0].ln()
    }
}
