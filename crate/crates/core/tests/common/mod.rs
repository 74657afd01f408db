//! Structural checks and curve fitting shared by the integration targets.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::One;

use polarfade::combinatorics::Binomials;
use polarfade::sim::SimPoint;
use polarfade::spectrum::{solve_general_macwilliams, SplitSpectrumTable, WeightGrid};

pub type Check = Result<String, String>;

type Reflection = fn(usize, usize, usize) -> (usize, usize);

fn zero_code(half: usize) -> WeightGrid {
    let mut g = WeightGrid::zeros(half, half);
    g.set(0, 0, BigUint::one());
    g
}

/// `S^(i) = A^(i) + S^(i+1)`, with `S^(N+1)` the zero code.
pub fn chain_identity(split: &SplitSpectrumTable) -> Check {
    let n = split.length();
    let h = split.half();
    for i in 1..=n {
        let s = split.subcode_row(i).map_err(|e| e.to_string())?;
        let a = split.polar_row(i).map_err(|e| e.to_string())?;
        let next = if i == n {
            zero_code(h)
        } else {
            split.subcode_row(i + 1).map_err(|e| e.to_string())?.clone()
        };
        for j in 0..=h {
            for k in 0..=h {
                if *s.get(j, k) != a.get(j, k) + next.get(j, k) {
                    return Err(format!("N={n} i={i} ({j},{k})"));
                }
            }
        }
    }
    Ok(format!("N={n}: {n} rows"))
}

/// Rows above `N/2` only hold words of the form `(b, b)`.
pub fn diagonal_rows(split: &SplitSpectrumTable) -> Check {
    let n = split.length();
    for i in n / 2 + 1..=n {
        for grid in [split.polar_row(i), split.subcode_row(i)] {
            let grid = grid.map_err(|e| e.to_string())?;
            if let Some((j, k, _)) = grid.iter_nonzero().find(|&(j, k, _)| j != k) {
                return Err(format!("N={n} i={i}: off-diagonal ({j},{k})"));
            }
        }
    }
    Ok(format!("N={n}: rows {}..={n}", n / 2 + 1))
}

fn symmetric_under(
    grid: &WeightGrid,
    h: usize,
    map: impl Fn(usize, usize) -> (usize, usize),
) -> Option<(usize, usize)> {
    for j in 0..=h {
        for k in 0..=h {
            let (a, b) = map(j, k);
            if grid.get(j, k) != grid.get(a, b) {
                return Some((j, k));
            }
        }
    }
    None
}

/// The flip/swap symmetries in the form they actually hold.
///
/// A subcode containing the half-all-ones words `(1,0)` and `(0,1)` (rows `i <= N/2`) is
/// invariant under complementing either half. Polar subcodes only keep that while the other
/// half-all-ones word stays out of the fixed coset, so single flips need `i < N/2`. The
/// all-ones word lies in every subcode, giving the double flip everywhere except `A^(N)`.
/// Swapping halves needs both halves free, again `i <= N/2`.
pub fn flip_swap_symmetry(split: &SplitSpectrumTable) -> Check {
    let n = split.length();
    let h = split.half();
    let mut checked = 0usize;
    for i in 1..=n {
        let s = split.subcode_row(i).map_err(|e| e.to_string())?;
        let a = split.polar_row(i).map_err(|e| e.to_string())?;
        let mut cases: Vec<(&str, &WeightGrid, Reflection)> =
            vec![("S double flip", s, |h, j, k| (h - j, h - k))];
        if i < n {
            cases.push(("A double flip", a, |h, j, k| (h - j, h - k)));
        }
        if i <= n / 2 {
            cases.push(("S flip", s, |h, j, k| (h - j, k)));
            cases.push(("S swap", s, |_, j, k| (k, j)));
            cases.push(("A swap", a, |_, j, k| (k, j)));
        }
        if i < n / 2 {
            cases.push(("A flip", a, |h, j, k| (h - j, k)));
        }
        for (name, grid, f) in cases {
            if let Some((j, k)) = symmetric_under(grid, h, |j, k| f(h, j, k)) {
                return Err(format!("N={n} i={i}: {name} fails at ({j},{k})"));
            }
            checked += 1;
        }
    }
    Ok(format!("N={n}: {checked} row symmetries"))
}

/// Rows where the unrestricted four-fold symmetry `(j,k) ~ (N/2-j,k) ~ (j,N/2-k) ~ (N/2-j,N/2-k)`
/// breaks for `A^(i)`.
pub fn unrestricted_fourfold_breaks(split: &SplitSpectrumTable) -> Vec<usize> {
    let h = split.half();
    (1..=split.length())
        .filter(|&i| {
            let a = split.polar_row(i).expect("row");
            symmetric_under(a, h, |j, k| (h - j, k)).is_some()
                || symmetric_under(a, h, |j, k| (j, h - k)).is_some()
                || symmetric_under(a, h, |j, k| (h - j, h - k)).is_some()
        })
        .collect()
}

pub fn row_totals(split: &SplitSpectrumTable) -> Check {
    let n = split.length();
    for i in 1..=n {
        let a = split.polar_row(i).map_err(|e| e.to_string())?.total();
        let s = split.subcode_row(i).map_err(|e| e.to_string())?.total();
        if a != BigUint::one() << (n - i) || s != BigUint::one() << (n - i + 1) {
            return Err(format!("N={n} i={i}: totals {a}, {s}"));
        }
    }
    Ok(format!("N={n}"))
}

/// Solve each row from its dual and solve the dual back from the result.
pub fn duality_involution(split: &SplitSpectrumTable) -> Check {
    let n = split.length();
    let h = split.half();
    let bin = Binomials::new(n);
    let row = |i: usize| -> Result<WeightGrid, String> {
        if i == n + 1 {
            Ok(zero_code(h))
        } else {
            split.subcode_row(i).cloned().map_err(|e| e.to_string())
        }
    };
    for i in 1..=n + 1 {
        let dual = row(n + 2 - i)?;
        for symmetric in [false, true] {
            let once = solve_general_macwilliams(&dual, n, i, &bin, symmetric).map_err(|e| e.to_string())?;
            if once != row(i)? {
                return Err(format!(
                    "N={n} i={i}: solve from dual disagrees (symmetric={symmetric})"
                ));
            }
            let twice =
                solve_general_macwilliams(&once, n, n + 2 - i, &bin, symmetric).map_err(|e| e.to_string())?;
            if twice != dual {
                return Err(format!(
                    "N={n} i={i}: round trip disagrees (symmetric={symmetric})"
                ));
            }
        }
    }
    Ok(format!("N={n}: {} rows", n + 1))
}

/// Least-squares slope of `log10 BLER` against `log10 γ`, skipping error-free points.
pub fn diversity_slope(points: &[&SimPoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.block_errors > 0)
        .map(|p| (p.snr_db / 10.0, p.bler.log10()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Points within the top `span_db` of a curve's SNR range.
pub fn top_span(points: &[SimPoint], span_db: f64) -> Vec<&SimPoint> {
    let top = points.iter().map(|p| p.snr_db).fold(f64::NEG_INFINITY, f64::max);
    points
        .iter()
        .filter(|p| p.snr_db >= top - span_db - 1e-9)
        .collect()
}

/// SNR in dB where the curve first falls to `target`, interpolating `log10 BLER` linearly.
pub fn crossing_db(points: &[SimPoint], target: f64) -> Option<f64> {
    let lt = target.log10();
    points.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.bler >= target && b.bler < target && a.block_errors > 0 && b.block_errors > 0 {
            let (la, lb) = (a.bler.log10(), b.bler.log10());
            Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db))
        } else {
            None
        }
    })
}
