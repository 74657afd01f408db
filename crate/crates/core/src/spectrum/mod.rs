//! Exact polar spectra and 2-split polar spectra.
//!
//! Tables are built by the doubling recursion `N -> 2N`: the upper half of
//! the rows of length `2N` repeats the length-`N` code in both halves, the
//! lower half is recovered from its dual through the general MacWilliams
//! identities, and polar-subcode enumerators follow as differences of
//! consecutive subcode enumerators. All counts are exact big integers.

mod build;
mod cache;
mod macwilliams;

pub use build::{build_tables, SpectrumLibrary, TableConfig};
pub use cache::{load_tables, obtain_tables, save_tables, CACHE_FORMAT, CACHE_VERSION};
pub use macwilliams::solve_general_macwilliams;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Dense table of counts indexed by a block-wise weight pair `(j, k)`,
/// `0 <= j <= dim1`, `0 <= k <= dim2`. A one-dimensional distribution is a
/// grid with `dim2 == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrid {
    dim1: usize,
    dim2: usize,
    cells: Vec<BigUint>,
}

impl WeightGrid {
    pub fn zeros(dim1: usize, dim2: usize) -> Self {
        WeightGrid {
            dim1,
            dim2,
            cells: vec![BigUint::zero(); (dim1 + 1) * (dim2 + 1)],
        }
    }

    /// One-dimensional distribution over weights `0..=values.len()-1`.
    pub fn from_distribution(values: Vec<BigUint>) -> Self {
        assert!(!values.is_empty());
        WeightGrid {
            dim1: values.len() - 1,
            dim2: 0,
            cells: values,
        }
    }

    pub fn dim1(&self) -> usize {
        self.dim1
    }

    pub fn dim2(&self) -> usize {
        self.dim2
    }

    #[inline]
    fn offset(&self, j: usize, k: usize) -> usize {
        j * (self.dim2 + 1) + k
    }

    /// Count at `(j, k)`; zero outside the grid.
    pub fn get(&self, j: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if j > self.dim1 || k > self.dim2 {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.cells[self.offset(j, k)]
    }

    pub fn set(&mut self, j: usize, k: usize, value: BigUint) {
        let o = self.offset(j, k);
        self.cells[o] = value;
    }

    /// Nonzero cells in row-major order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> + '_ {
        let w = self.dim2 + 1;
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(o, v)| (o / w, o % w, v))
    }

    pub fn total(&self) -> BigUint {
        self.cells.iter().sum()
    }

    /// `self - other`, failing if any cell would go negative.
    pub fn checked_sub(&self, other: &WeightGrid) -> Result<WeightGrid> {
        if self.dim1 != other.dim1 || self.dim2 != other.dim2 {
            return Err(Error::tripwire("grid shape mismatch in subtraction"));
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for (o, (a, b)) in self.cells.iter().zip(&other.cells).enumerate() {
            if a < b {
                let w = self.dim2 + 1;
                return Err(Error::tripwire(format!(
                    "negative enumerator at ({}, {})",
                    o / w,
                    o % w
                )));
            }
            cells.push(a - b);
        }
        Ok(WeightGrid {
            dim1: self.dim1,
            dim2: self.dim2,
            cells,
        })
    }

    /// Collapse `(j, k)` onto `j + k`.
    pub fn marginal(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.dim1 + self.dim2 + 1];
        for (j, k, v) in self.iter_nonzero() {
            out[j + k] += v;
        }
        out
    }

    /// One-dimensional view (only meaningful when `dim2 == 0`).
    pub fn as_distribution(&self) -> &[BigUint] {
        debug_assert_eq!(self.dim2, 0);
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [BigUint] {
        &mut self.cells
    }
}

fn check_row(length: usize, i: usize) -> Result<()> {
    if i == 0 || i > length {
        return Err(Error::MissingTable(format!("row {i} outside 1..={length}")));
    }
    Ok(())
}

/// Polar spectrum `A_N^(i)(d)` and subcode weight distributions `S_N^(i)(d)` for one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    length: usize,
    polar: Vec<Vec<BigUint>>,
    subcode: Vec<Vec<BigUint>>,
}

impl SpectrumTable {
    pub(crate) fn from_rows(length: usize, polar: Vec<Vec<BigUint>>, subcode: Vec<Vec<BigUint>>) -> Self {
        debug_assert_eq!(polar.len(), length);
        debug_assert_eq!(subcode.len(), length);
        SpectrumTable {
            length,
            polar,
            subcode,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `A_N^(i)(d)`, zero for `d > N`.
    pub fn polar(&self, i: usize, d: usize) -> Result<BigUint> {
        Ok(self.polar_row(i)?.get(d).cloned().unwrap_or_default())
    }

    pub fn subcode(&self, i: usize, d: usize) -> Result<BigUint> {
        Ok(self.subcode_row(i)?.get(d).cloned().unwrap_or_default())
    }

    pub fn polar_row(&self, i: usize) -> Result<&[BigUint]> {
        check_row(self.length, i)?;
        Ok(&self.polar[i - 1])
    }

    pub fn subcode_row(&self, i: usize) -> Result<&[BigUint]> {
        check_row(self.length, i)?;
        Ok(&self.subcode[i - 1])
    }

    /// Smallest nonzero weight of the polar subcode `D_N^(i)`.
    pub fn d_min(&self, i: usize) -> Result<usize> {
        self.polar_row(i)?
            .iter()
            .position(|v| !v.is_zero())
            .ok_or_else(|| Error::tripwire(format!("polar spectrum row {i} is empty")))
    }
}

/// 2-split polar spectrum `A_N^(i)(j, k)` and subcode enumerators `S_N^(i)(j, k)`,
/// each block of length `N/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpectrumTable {
    length: usize,
    polar: Vec<WeightGrid>,
    subcode: Vec<WeightGrid>,
}

impl SplitSpectrumTable {
    pub(crate) fn from_rows(length: usize, polar: Vec<WeightGrid>, subcode: Vec<WeightGrid>) -> Self {
        debug_assert_eq!(polar.len(), length);
        SplitSpectrumTable {
            length,
            polar,
            subcode,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn half(&self) -> usize {
        self.length / 2
    }

    pub fn polar(&self, i: usize, j: usize, k: usize) -> Result<BigUint> {
        Ok(self.polar_row(i)?.get(j, k).clone())
    }

    pub fn subcode(&self, i: usize, j: usize, k: usize) -> Result<BigUint> {
        Ok(self.subcode_row(i)?.get(j, k).clone())
    }

    pub fn polar_row(&self, i: usize) -> Result<&WeightGrid> {
        check_row(self.length, i)?;
        Ok(&self.polar[i - 1])
    }

    pub fn subcode_row(&self, i: usize) -> Result<&WeightGrid> {
        check_row(self.length, i)?;
        Ok(&self.subcode[i - 1])
    }

    /// Minimum total weight `j + k` with a nonzero polar enumerator.
    pub fn d_min(&self, i: usize) -> Result<usize> {
        self.polar_row(i)?
            .iter_nonzero()
            .map(|(j, k, _)| j + k)
            .min()
            .ok_or_else(|| Error::tripwire(format!("split spectrum row {i} is empty")))
    }

    /// Ordinary polar spectrum obtained by summing over `j + k = d`.
    pub fn marginal(&self) -> SpectrumTable {
        SpectrumTable {
            length: self.length,
            polar: self.polar.iter().map(WeightGrid::marginal).collect(),
            subcode: self.subcode.iter().map(WeightGrid::marginal).collect(),
        }
    }
}

/// Smallest `d` with `A_N^(i)(d) > 0`.
pub fn d_min(table: &SpectrumTable, i: usize) -> Result<usize> {
    table.d_min(i)
}
