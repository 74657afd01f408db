//! Gaussian approximation of density evolution.
//!
//! LLRs are modelled as `N(m, 2m)`. Channel LLRs start at mean `4γ`. Along the natural-order
//! tree a check node maps `m` to `φ^{-1}(1 - (1 - φ(m))^2)` and a bit node to `2m`; the first
//! split consumes the most significant bit of `i - 1`.
//!
//! `φ` uses the usual two-piece fit:
//! `exp(-0.4527 x^0.86 + 0.0218)` below 10 and
//! `sqrt(π/x) exp(-x/4) (1 - 10/(7x))` from 10 up.

use statrs::function::erf::erfc;

const PHI_A: f64 = -0.4527;
const PHI_B: f64 = 0.86;
const PHI_C: f64 = 0.0218;
const PHI_SPLIT: f64 = 10.0;

/// `ln φ(x)` for `x > 0`.
pub fn ln_phi(x: f64) -> f64 {
    if x < PHI_SPLIT {
        PHI_A * x.powf(PHI_B) + PHI_C
    } else {
        0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (1.0 - 10.0 / (7.0 * x)).ln()
    }
}

/// Solves `ln φ(x) = ln_y` by bisection. `φ` is decreasing apart from a tiny jump at the
/// split point, which bisection tolerates.
pub fn phi_inverse_ln(ln_y: f64) -> f64 {
    if ln_y >= PHI_C {
        return 0.0;
    }
    let mut hi = 1.0;
    while ln_phi(hi) > ln_y {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn check_node(m: f64) -> f64 {
    if m <= 0.0 {
        return 0.0;
    }
    // 1 - (1 - φ)^2 = φ (2 - φ), kept in the log domain
    let lp = ln_phi(m).min(0.0);
    phi_inverse_ln(lp + (2.0 - lp.exp()).ln())
}

/// Mean LLR of every polarized channel, index `i - 1`.
pub fn ga_means(length: usize, design_snr: f64) -> Vec<f64> {
    let n = length.trailing_zeros();
    let mut level = vec![4.0 * design_snr];
    for _ in 0..n {
        level = level.iter().flat_map(|&m| [check_node(m), 2.0 * m]).collect();
    }
    level
}

/// `ln Q(sqrt(m/2))`, the approximate error probability of an `N(m, 2m)` LLR.
pub fn ln_error_probability(m: f64) -> f64 {
    let x = (m / 2.0).sqrt();
    let q = 0.5 * erfc(x / std::f64::consts::SQRT_2);
    if q > 1e-300 {
        q.ln()
    } else {
        // Mills-ratio expansion, accurate far beyond the double range
        -x * x / 2.0 - (x * (2.0 * std::f64::consts::PI).sqrt()).ln() + (1.0 - 1.0 / (x * x)).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for x in [0.05, 0.9, 3.0, 9.5, 10.5, 40.0, 1e4] {
            let back = phi_inverse_ln(ln_phi(x));
            assert!((back - x).abs() < 1e-8 * x.max(1.0), "x={x} back={back}");
        }
    }

    #[test]
    fn polarization_direction() {
        for g in [0.1, 1.0, 10.0] {
            let m = ga_means(2, g);
            assert!(m[1] > m[0]);
            assert_eq!(m[1], 8.0 * g);
        }
        let m = ga_means(8, 10f64.powf(0.3));
        let best = (0..8).max_by(|&a, &b| m[a].total_cmp(&m[b])).unwrap();
        assert_eq!(best, 7);
    }

    #[test]
    fn error_probability_is_monotone_and_finite() {
        let mut prev = 0.0;
        for m in [0.01, 1.0, 10.0, 100.0, 3000.0, 1e5] {
            let l = ln_error_probability(m);
            assert!(l.is_finite() && l < prev);
            prev = l;
        }
        assert!(
            (ln_error_probability(2.0) - (0.5 * erfc(1.0 / std::f64::consts::SQRT_2)).ln()).abs() < 1e-12
        );
    }
}
