//! General (split) MacWilliams identities solved as a binomial-moment transform.
//!
//! For a code `C` of length `n1 + n2` with dual `C⊥` of dimension `i - 1`,
//! the split identities read, for `0 <= s <= n1`, `0 <= t <= n2`,
//!
//! ```text
//! Σ C(n1-j, s) C(n2-k, t) S⊥(j,k) = 2^(i-1-s-t) Σ C(n1-j, n1-s) C(n2-k, n2-t) S(j,k)
//! ```
//!
//! Writing `a = n1 - j`, `b = n2 - k`, `σ = n1 - s`, `τ = n2 - t` and
//! `Y(a, b) = S(n1-a, n2-b)`, the right-hand sum is the separable descending
//! binomial moment `T(σ, τ) = Σ_{a>=σ, b>=τ} C(a,σ) C(b,τ) Y(a,b)`, which
//! inverts axis by axis through `Y(a) = Σ_{σ>=a} (-1)^(σ-a) C(σ,a) T(σ)`.
//! The left-hand moments come from the known dual. The one-dimensional
//! identities are the special case `n2 = 0`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use super::WeightGrid;
use crate::combinatorics::Binomials;
use crate::error::{Error, Result};

/// Recover the split weight distribution `S_N^(i)` of the subcode `C_N^(i)`
/// from the full split distribution of its dual (`C_N^(N+2-i)`, zero word included).
///
/// `dual` fixes the block lengths (`dual.dim1() + dual.dim2() == length`).
/// With `exploit_symmetry`, and when the code is known to contain both
/// half-all-ones words and to be invariant under swapping halves (true for
/// `i <= N/2` with equal halves), only the fundamental domain
/// `k <= j <= N/4` is inverted and the rest is filled by reflection.
pub fn solve_general_macwilliams(
    dual: &WeightGrid,
    length: usize,
    index: usize,
    binomials: &Binomials,
    exploit_symmetry: bool,
) -> Result<WeightGrid> {
    let (n1, n2) = (dual.dim1(), dual.dim2());
    if n1 + n2 != length {
        return Err(Error::invalid(format!(
            "dual grid covers {} positions, expected {length}",
            n1 + n2
        )));
    }
    if index == 0 || index > length + 1 {
        return Err(Error::invalid(format!(
            "row index {index} outside 1..={}",
            length + 1
        )));
    }
    if binomials.max_n() < n1.max(n2) {
        return Err(Error::invalid("binomial table too small for this length"));
    }
    let symmetric = exploit_symmetry && n1 == n2 && index <= n1;

    let moments = scaled_moments(dual, length, index, binomials)?;
    let unknown = invert_moments(&moments, n1, n2, binomials, symmetric);

    let mut out = WeightGrid::zeros(n1, n2);
    let w = n2 + 1;
    for (o, v) in unknown.into_iter().enumerate() {
        let Some(v) = v else { continue };
        let (a, b) = (o / w, o % w);
        let (j, k) = (n1 - a, n2 - b);
        match v.sign() {
            Sign::Minus => {
                return Err(Error::tripwire(format!(
                    "negative split enumerator at ({j}, {k}) for row {index} of length {length}"
                )))
            }
            _ => out.set(j, k, v.magnitude().clone()),
        }
    }
    if symmetric {
        let h = n1;
        for j in 0..=h {
            for k in 0..=h {
                let (mut jj, mut kk) = (j.min(h - j), k.min(h - k));
                if kk > jj {
                    std::mem::swap(&mut jj, &mut kk);
                }
                if (jj, kk) != (j, k) {
                    let v = out.get(jj, kk).clone();
                    out.set(j, k, v);
                }
            }
        }
    }
    Ok(out)
}

/// `T(σ, τ) = 2^(length+1-index-σ-τ) · M(n1-σ, n2-τ)` where `M` are the dual's moments.
/// Stored row-major over `(σ, τ)`.
fn scaled_moments(
    dual: &WeightGrid,
    length: usize,
    index: usize,
    binomials: &Binomials,
) -> Result<Vec<BigUint>> {
    let (n1, n2) = (dual.dim1(), dual.dim2());
    let w = n2 + 1;

    // X(a, b) = S⊥(n1-a, n2-b); first axis: P(s, b) = Σ_{a>=s} C(a,s) X(a,b)
    let mut partial = vec![BigUint::zero(); (n1 + 1) * w];
    for a in 0..=n1 {
        for b in 0..=n2 {
            let x = dual.get(n1 - a, n2 - b);
            if x.is_zero() {
                continue;
            }
            for s in 0..=a {
                partial[s * w + b] += binomials.get(a, s) * x;
            }
        }
    }
    // second axis: M(s, t) = Σ_{b>=t} C(b,t) P(s,b)
    let mut moments = vec![BigUint::zero(); (n1 + 1) * w];
    for s in 0..=n1 {
        for b in 0..=n2 {
            let p = &partial[s * w + b];
            if p.is_zero() {
                continue;
            }
            for t in 0..=b {
                moments[s * w + t] += binomials.get(b, t) * p;
            }
        }
    }

    let mut scaled = vec![BigUint::zero(); (n1 + 1) * w];
    for sigma in 0..=n1 {
        for tau in 0..=n2 {
            let m = &moments[(n1 - sigma) * w + (n2 - tau)];
            if m.is_zero() {
                continue;
            }
            let exponent = (length + 1) as i64 - index as i64 - sigma as i64 - tau as i64;
            scaled[sigma * w + tau] = if exponent >= 0 {
                m << exponent as usize
            } else {
                let shift = (-exponent) as usize;
                let divisor = BigUint::from(1u8) << shift;
                let (q, r) = m.div_rem(&divisor);
                if !r.is_zero() {
                    return Err(Error::tripwire(format!(
                        "moment ({sigma}, {tau}) not divisible by 2^{shift} (row {index}, length {length})"
                    )));
                }
                q
            };
        }
    }
    Ok(scaled)
}

/// Signed accumulator kept as two unsigned halves.
#[derive(Default)]
struct SignedSum {
    pos: BigUint,
    neg: BigUint,
}

impl SignedSum {
    fn add(&mut self, negative: bool, term: BigUint) {
        if negative {
            self.neg += term;
        } else {
            self.pos += term;
        }
    }

    fn finish(self) -> BigInt {
        BigInt::from(self.pos) - BigInt::from(self.neg)
    }
}

/// Invert the separable binomial moments. Returns `Y(a, b)` row-major; cells
/// outside the requested domain are `None`.
fn invert_moments(
    moments: &[BigUint],
    n1: usize,
    n2: usize,
    binomials: &Binomials,
    symmetric: bool,
) -> Vec<Option<BigInt>> {
    let w = n2 + 1;
    // fundamental domain in (a, b) = (h-j, h-k): a >= h - h/2, b >= a
    let a_min = if symmetric { n1 - n1 / 2 } else { 0 };
    let b_min = if symmetric { a_min } else { 0 };

    // Z(σ, b) = Σ_{τ>=b} (-1)^(τ-b) C(τ,b) T(σ,τ)
    let mut z = vec![BigInt::zero(); (n1 + 1) * w];
    for sigma in 0..=n1 {
        for b in b_min..=n2 {
            let mut acc = SignedSum::default();
            for tau in b..=n2 {
                let t = &moments[sigma * w + tau];
                if t.is_zero() {
                    continue;
                }
                acc.add((tau - b) % 2 == 1, binomials.get(tau, b) * t);
            }
            z[sigma * w + b] = acc.finish();
        }
    }

    // Y(a, b) = Σ_{σ>=a} (-1)^(σ-a) C(σ,a) Z(σ,b)
    let mut out = vec![None; (n1 + 1) * w];
    for a in a_min..=n1 {
        let b_start = if symmetric { a } else { 0 };
        for b in b_start..=n2 {
            let mut acc = SignedSum::default();
            for sigma in a..=n1 {
                let zv = &z[sigma * w + b];
                let flip = (sigma - a) % 2 == 1;
                match zv.sign() {
                    Sign::NoSign => continue,
                    Sign::Plus => acc.add(flip, binomials.get(sigma, a) * zv.magnitude()),
                    Sign::Minus => acc.add(!flip, binomials.get(sigma, a) * zv.magnitude()),
                }
            }
            out[a * w + b] = Some(acc.finish());
        }
    }
    out
}
