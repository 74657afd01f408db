use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{solve_general_macwilliams, SpectrumTable, SplitSpectrumTable, WeightGrid};
use crate::combinatorics::Binomials;
use crate::error::{Error, Result};

/// Table ceilings. Split tables cost `O(N^4)` per length (the separable
/// transform keeps each solve cubic), ordinary tables `O(N^3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableConfig {
    /// Largest `n` for which the 2-split spectrum of length `2^n` is built.
    pub split_max_exponent: u32,
    /// Largest `n` for which the ordinary spectrum of length `2^n` is built.
    pub spectrum_max_exponent: u32,
    /// Invert only the fundamental domain of the flip/swap symmetry and reflect.
    pub exploit_symmetry: bool,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            split_max_exponent: 8,
            spectrum_max_exponent: 10,
            exploit_symmetry: true,
        }
    }
}

impl TableConfig {
    /// Same ceiling for split and ordinary tables.
    pub fn up_to(n_max: u32) -> Self {
        TableConfig {
            split_max_exponent: n_max,
            spectrum_max_exponent: n_max,
            exploit_symmetry: true,
        }
    }
}

/// All spectrum tables built for one configuration, keyed by block length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpectrumLibrary {
    pub(crate) spectra: BTreeMap<usize, SpectrumTable>,
    pub(crate) splits: BTreeMap<usize, SplitSpectrumTable>,
}

impl SpectrumLibrary {
    /// Split and ordinary tables for every `N = 2, 4, ..., 2^n_max`.
    pub fn build(n_max: u32) -> Result<Self> {
        build_tables(&TableConfig::up_to(n_max))
    }

    pub fn spectrum(&self, length: usize) -> Result<&SpectrumTable> {
        self.spectra
            .get(&length)
            .ok_or_else(|| Error::MissingTable(format!("no polar spectrum for N={length}")))
    }

    pub fn split(&self, length: usize) -> Result<&SplitSpectrumTable> {
        self.splits
            .get(&length)
            .ok_or_else(|| Error::MissingTable(format!("no split spectrum for N={length}")))
    }

    pub fn spectrum_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.spectra.keys().copied()
    }

    pub fn split_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.splits.keys().copied()
    }

    pub fn insert_spectrum(&mut self, table: SpectrumTable) {
        self.spectra.insert(table.length(), table);
    }

    pub fn insert_split(&mut self, table: SplitSpectrumTable) {
        self.splits.insert(table.length(), table);
    }
}

/// Build every table up to the configured ceilings by repeated doubling.
pub fn build_tables(config: &TableConfig) -> Result<SpectrumLibrary> {
    if config.spectrum_max_exponent < 1 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    if config.split_max_exponent > config.spectrum_max_exponent {
        return Err(Error::invalid(
            "split ceiling cannot exceed the ordinary spectrum ceiling",
        ));
    }
    let max_len = 1usize << config.spectrum_max_exponent;
    let split_max_len = if config.split_max_exponent >= 1 {
        1usize << config.split_max_exponent
    } else {
        0
    };
    // split solves run over half-length axes, ordinary ones over the full length
    let widest_axis = if max_len > split_max_len {
        max_len
    } else {
        split_max_len / 2
    };
    let binomials = Binomials::new(widest_axis.max(2));

    let mut lib = SpectrumLibrary::default();
    let (base_split, base) = base_case();
    if split_max_len >= 2 {
        lib.insert_split(base_split);
    }
    lib.insert_spectrum(base);

    let mut n = 2;
    while 2 * n <= max_len {
        let prev = lib.spectrum(n)?.clone();
        if 2 * n <= split_max_len {
            let split = double_split(&prev, &binomials, config.exploit_symmetry)?;
            lib.insert_spectrum(split.marginal());
            lib.insert_split(split);
        } else {
            lib.insert_spectrum(double_spectrum(&prev, &binomials)?);
        }
        n *= 2;
    }
    Ok(lib)
}

/// Length-2 tables: the full space and the repetition code.
fn base_case() -> (SplitSpectrumTable, SpectrumTable) {
    let one = || BigUint::one();
    let mut s1 = WeightGrid::zeros(1, 1);
    for (j, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        s1.set(j, k, one());
    }
    let mut s2 = WeightGrid::zeros(1, 1);
    s2.set(0, 0, one());
    s2.set(1, 1, one());
    let a1 = s1.checked_sub(&s2).expect("base case");
    let mut a2 = WeightGrid::zeros(1, 1);
    a2.set(1, 1, one());
    let split = SplitSpectrumTable::from_rows(2, vec![a1, a2], vec![s1, s2]);
    let spectrum = split.marginal();
    (split, spectrum)
}

/// Split tables of length `2n` from the ordinary tables of length `n`.
fn double_split(prev: &SpectrumTable, binomials: &Binomials, symmetry: bool) -> Result<SplitSpectrumTable> {
    let n = prev.length();
    let len = 2 * n;
    let mut polar: Vec<Option<WeightGrid>> = vec![None; len];
    let mut subcode: Vec<Option<WeightGrid>> = vec![None; len];

    // rows n+1..=2n: both halves carry the same length-n codeword
    for l in n + 1..=len {
        let mut a = WeightGrid::zeros(n, n);
        let mut s = WeightGrid::zeros(n, n);
        for (j, (av, sv)) in prev
            .polar_row(l - n)?
            .iter()
            .zip(prev.subcode_row(l - n)?)
            .enumerate()
        {
            a.set(j, j, av.clone());
            s.set(j, j, sv.clone());
        }
        polar[l - 1] = Some(a);
        subcode[l - 1] = Some(s);
    }

    // rows 2..=n: dual of C^(l) is C^(2n+2-l), already known
    let solved: Vec<Result<WeightGrid>> = (2..=n)
        .into_par_iter()
        .map(|l| {
            let dual = subcode[len + 2 - l - 1].as_ref().expect("upper rows built");
            solve_general_macwilliams(dual, len, l, binomials, symmetry)
        })
        .collect();
    for (l, s) in (2..=n).zip(solved) {
        subcode[l - 1] = Some(s?);
    }

    // row 1: the whole space
    let mut full = WeightGrid::zeros(n, n);
    for j in 0..=n {
        for k in 0..=n {
            full.set(j, k, binomials.get(n, j) * binomials.get(n, k));
        }
    }
    subcode[0] = Some(full);

    for l in (1..=n).rev() {
        let s = subcode[l - 1].as_ref().expect("filled");
        let next = subcode[l].as_ref().expect("filled");
        polar[l - 1] = Some(
            s.checked_sub(next)
                .map_err(|e| Error::tripwire(format!("row {l} of length {len}: {e}")))?,
        );
    }

    Ok(SplitSpectrumTable::from_rows(
        len,
        polar.into_iter().map(|g| g.expect("filled")).collect(),
        subcode.into_iter().map(|g| g.expect("filled")).collect(),
    ))
}

/// Ordinary tables of length `2n` from those of length `n` using the one-dimensional identities.
fn double_spectrum(prev: &SpectrumTable, binomials: &Binomials) -> Result<SpectrumTable> {
    let n = prev.length();
    let len = 2 * n;
    let mut polar: Vec<Vec<BigUint>> = vec![Vec::new(); len];
    let mut subcode: Vec<Vec<BigUint>> = vec![Vec::new(); len];

    for l in n + 1..=len {
        let spread = |row: &[BigUint]| {
            let mut out = vec![BigUint::zero(); len + 1];
            for (d, v) in row.iter().enumerate() {
                out[2 * d] = v.clone();
            }
            out
        };
        polar[l - 1] = spread(prev.polar_row(l - n)?);
        subcode[l - 1] = spread(prev.subcode_row(l - n)?);
    }

    let solved: Vec<Result<WeightGrid>> = (2..=n)
        .into_par_iter()
        .map(|l| {
            let dual = WeightGrid::from_distribution(subcode[len + 2 - l - 1].clone());
            solve_general_macwilliams(&dual, len, l, binomials, false)
        })
        .collect();
    for (l, s) in (2..=n).zip(solved) {
        subcode[l - 1] = s?.as_distribution().to_vec();
    }
    subcode[0] = (0..=len).map(|d| binomials.get(len, d).clone()).collect();

    for l in (1..=n).rev() {
        let mut row = Vec::with_capacity(len + 1);
        for (d, (s, next)) in subcode[l - 1].iter().zip(&subcode[l]).enumerate() {
            if s < next {
                return Err(Error::tripwire(format!(
                    "negative polar enumerator at d={d}, row {l}, length {len}"
                )));
            }
            row.push(s - next);
        }
        polar[l - 1] = row;
    }
    Ok(SpectrumTable::from_rows(len, polar, subcode))
}
