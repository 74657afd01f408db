//! Versioned JSON cache for spectrum tables.
//!
//! One file per `(N, kind)`. Only polar-subcode enumerators are stored (nonzero
//! cells, counts as decimal strings); subcode enumerators are rebuilt on load
//! as suffix sums plus the zero word. The trailing `sha256` field is the hex
//! digest of the compact serialization of every other field in order.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{build_tables, SpectrumLibrary, SpectrumTable, SplitSpectrumTable, TableConfig, WeightGrid};
use crate::error::{Error, Result};

pub const CACHE_FORMAT: &str = "polar-spectrum-cache";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Split,
    #[serde(rename = "1d")]
    OneD,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Split(usize, usize, usize, String),
    OneD(usize, usize, String),
}

#[derive(Serialize)]
struct Body<'a> {
    format: &'a str,
    version: u32,
    #[serde(rename = "N")]
    length: usize,
    kind: Kind,
    entries: &'a [Entry],
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    #[serde(rename = "N")]
    length: usize,
    kind: Kind,
    entries: Vec<Entry>,
    sha256: String,
}

fn digest(length: usize, kind: Kind, entries: &[Entry]) -> String {
    let body = Body {
        format: CACHE_FORMAT,
        version: CACHE_VERSION,
        length,
        kind,
        entries,
    };
    let canonical = serde_json::to_vec(&body).expect("plain data serializes");
    hex::encode(Sha256::digest(&canonical))
}

fn render(length: usize, kind: Kind, entries: Vec<Entry>) -> String {
    let sha256 = digest(length, kind, &entries);
    let file = CacheFile {
        format: CACHE_FORMAT.to_string(),
        version: CACHE_VERSION,
        length,
        kind,
        entries,
        sha256,
    };
    let mut text = serde_json::to_string(&file).expect("plain data serializes");
    text.push('\n');
    text
}

impl SplitSpectrumTable {
    /// Canonical cache serialization.
    pub fn to_cache_string(&self) -> String {
        let mut entries = Vec::new();
        for i in 1..=self.length() {
            for (j, k, v) in self.polar[i - 1].iter_nonzero() {
                entries.push(Entry::Split(i, j, k, v.to_string()));
            }
        }
        render(self.length(), Kind::Split, entries)
    }

    pub fn from_cache_str(text: &str, origin: &Path) -> Result<Self> {
        let file = parse(text, origin, Kind::Split)?;
        let n = file.length;
        let h = n / 2;
        let mut polar = vec![WeightGrid::zeros(h, h); n];
        for e in &file.entries {
            let Entry::Split(i, j, k, c) = e else {
                return Err(cache_err(origin, "one-dimensional entry in a split cache"));
            };
            if *i == 0 || *i > n || *j > h || *k > h {
                return Err(cache_err(origin, format!("entry [{i}, {j}, {k}] out of range")));
            }
            polar[i - 1].set(*j, *k, parse_count(c, origin)?);
        }
        let mut subcode = Vec::with_capacity(n);
        let mut acc = WeightGrid::zeros(h, h);
        acc.set(0, 0, BigUint::one());
        for row in polar.iter().rev() {
            for (c, v) in acc.cells_mut().iter_mut().zip(&row.cells) {
                *c += v;
            }
            subcode.push(acc.clone());
        }
        subcode.reverse();
        Ok(SplitSpectrumTable::from_rows(n, polar, subcode))
    }
}

impl SpectrumTable {
    pub fn to_cache_string(&self) -> String {
        let mut entries = Vec::new();
        for i in 1..=self.length() {
            for (d, v) in self.polar[i - 1].iter().enumerate() {
                if !v.is_zero() {
                    entries.push(Entry::OneD(i, d, v.to_string()));
                }
            }
        }
        render(self.length(), Kind::OneD, entries)
    }

    pub fn from_cache_str(text: &str, origin: &Path) -> Result<Self> {
        let file = parse(text, origin, Kind::OneD)?;
        let n = file.length;
        let mut polar = vec![vec![BigUint::zero(); n + 1]; n];
        for e in &file.entries {
            let Entry::OneD(i, d, c) = e else {
                return Err(cache_err(origin, "split entry in a one-dimensional cache"));
            };
            if *i == 0 || *i > n || *d > n {
                return Err(cache_err(origin, format!("entry [{i}, {d}] out of range")));
            }
            polar[i - 1][*d] = parse_count(c, origin)?;
        }
        let mut subcode = Vec::with_capacity(n);
        let mut acc = vec![BigUint::zero(); n + 1];
        acc[0] = BigUint::one();
        for row in polar.iter().rev() {
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v;
            }
            subcode.push(acc.clone());
        }
        subcode.reverse();
        Ok(SpectrumTable::from_rows(n, polar, subcode))
    }
}

fn cache_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Cache {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn parse_count(text: &str, origin: &Path) -> Result<BigUint> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(cache_err(
            origin,
            format!("count {text:?} is not a decimal integer"),
        ));
    }
    text.parse::<BigUint>()
        .map_err(|e| cache_err(origin, format!("count {text:?}: {e}")))
}

fn parse(text: &str, origin: &Path, expected: Kind) -> Result<CacheFile> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| cache_err(origin, format!("malformed JSON: {e}")))?;
    match value.get("format").and_then(|v| v.as_str()) {
        Some(CACHE_FORMAT) => {}
        other => {
            return Err(cache_err(
                origin,
                format!("wrong magic: format is {other:?}, expected {CACHE_FORMAT:?}"),
            ))
        }
    }
    match value.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == CACHE_VERSION as u64 => {}
        other => {
            return Err(cache_err(
                origin,
                format!("version mismatch: found {other:?}, expected {CACHE_VERSION}"),
            ))
        }
    }
    let file: CacheFile =
        serde_json::from_value(value).map_err(|e| cache_err(origin, format!("malformed cache: {e}")))?;
    if file.kind != expected {
        return Err(cache_err(
            origin,
            format!("expected kind {expected:?}, found {:?}", file.kind),
        ));
    }
    if !file.length.is_power_of_two() || file.length < 2 {
        return Err(cache_err(
            origin,
            format!("N={} is not a power of two", file.length),
        ));
    }
    let actual = digest(file.length, file.kind, &file.entries);
    if actual != file.sha256 {
        return Err(cache_err(
            origin,
            format!("checksum failure: stored {}, computed {actual}", file.sha256),
        ));
    }
    Ok(file)
}

fn split_path(dir: &Path, length: usize) -> PathBuf {
    dir.join(format!("split-N{length}.json"))
}

fn spectrum_path(dir: &Path, length: usize) -> PathBuf {
    dir.join(format!("spectrum-N{length}.json"))
}

/// Write every table of `library` into `dir` (created if missing).
pub fn save_tables(library: &SpectrumLibrary, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (len, table) in &library.splits {
        let path = split_path(dir, *len);
        fs::write(&path, table.to_cache_string())?;
        written.push(path);
    }
    for (len, table) in &library.spectra {
        let path = spectrum_path(dir, *len);
        fs::write(&path, table.to_cache_string())?;
        written.push(path);
    }
    Ok(written)
}

/// Load every cache file found in `dir`. Any invalid file fails the whole load.
pub fn load_tables(dir: &Path) -> Result<SpectrumLibrary> {
    let mut library = SpectrumLibrary::default();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if name.starts_with("split-N") {
            let text = fs::read_to_string(&path)?;
            library.insert_split(SplitSpectrumTable::from_cache_str(&text, &path)?);
        } else if name.starts_with("spectrum-N") {
            let text = fs::read_to_string(&path)?;
            library.insert_spectrum(SpectrumTable::from_cache_str(&text, &path)?);
        }
    }
    Ok(library)
}

fn covers(library: &SpectrumLibrary, config: &TableConfig) -> bool {
    let has_spectra = (1..=config.spectrum_max_exponent).all(|n| library.spectrum(1 << n).is_ok());
    let has_splits = (1..=config.split_max_exponent).all(|n| library.split(1 << n).is_ok());
    has_spectra && has_splits
}

/// Tables for `config`, read from `cache_dir` when it already holds them; otherwise built
/// and written there. A corrupt cache file is an error, not a rebuild trigger.
pub fn obtain_tables(config: &TableConfig, cache_dir: Option<&Path>) -> Result<SpectrumLibrary> {
    if let Some(dir) = cache_dir.filter(|d| d.is_dir()) {
        let cached = load_tables(dir)?;
        if covers(&cached, config) {
            return Ok(cached);
        }
    }
    let built = build_tables(config)?;
    if let Some(dir) = cache_dir {
        save_tables(&built, dir)?;
    }
    Ok(built)
}
