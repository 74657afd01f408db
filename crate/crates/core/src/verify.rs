//! Self-checks that cross the engine against oracles and invariants. Failures are results,
//! not errors.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use crate::bounds::{
    channel_error_bound_random, enumerate_patterns, ln_pattern_probability, pattern_probability_exact,
    SnrPoint,
};
use crate::construction::{ga_means, pdw_block, pdw_random, rank, ConstructionParams, Metric};
use crate::error::{Error, Result};
use crate::polar::{brute_force_split_spectrum, encode, CodeSpec, EnumerationGuard, SubcodeId};
use crate::sim::{rng::trial_rng, run_bler, sc_decode, scl_decode, MappingSpec, SimConfig, StopRule};
use crate::spectrum::{SpectrumLibrary, SpectrumTable, SplitSpectrumTable};

/// Reference split-spectrum entries at N = 16: `(i, d1, d2, count)`.
pub const KNOWN_N16_SPLIT: &[(usize, usize, usize, u64)] = &[
    (1, 1, 0, 8),
    (1, 3, 0, 56),
    (1, 4, 3, 3920),
    (2, 2, 2, 384),
    (2, 4, 4, 2432),
    (3, 3, 3, 784),
    (9, 1, 1, 8),
    (9, 3, 3, 56),
    (10, 2, 2, 16),
    (11, 4, 4, 16),
    (13, 2, 2, 4),
    (14, 4, 4, 4),
    (15, 4, 4, 2),
    (16, 8, 8, 1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spectrum,
    Bounds,
    Construction,
    Sim,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Spectrum, Suite::Bounds, Suite::Construction, Suite::Sim];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Bounds => "bounds",
            Suite::Construction => "construction",
            Suite::Sim => "sim",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Oracle comparisons run for every `N <= 2^oracle_exponent`.
    pub oracle_exponent: u32,
    /// Cache directory whose files are validated by the spectrum suite.
    pub cache_dir: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            oracle_exponent: 4,
            cache_dir: None,
        }
    }
}

struct Recorder {
    suite: Suite,
    out: Vec<CheckResult>,
}

impl Recorder {
    fn check(&mut self, name: &str, outcome: Result<std::result::Result<String, String>>) {
        let (passed, detail) = match outcome {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        self.out.push(CheckResult {
            suite: self.suite,
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

type Outcome = Result<std::result::Result<String, String>>;

fn pass(detail: impl Into<String>) -> Outcome {
    Ok(Ok(detail.into()))
}

fn fail(detail: impl Into<String>) -> Outcome {
    Ok(Err(detail.into()))
}

/// Run the selected suites.
pub fn verify(suites: &[Suite], opts: &VerifyOptions) -> VerifyReport {
    let lib = SpectrumLibrary::build(opts.oracle_exponent.max(4));
    let mut report = VerifyReport::default();
    for &suite in suites {
        let mut rec = Recorder {
            suite,
            out: Vec::new(),
        };
        match &lib {
            Err(e) => rec.check("build tables", fail(format!("error: {e}"))),
            Ok(lib) => match suite {
                Suite::Spectrum => spectrum_suite(&mut rec, lib, opts),
                Suite::Bounds => bounds_suite(&mut rec, lib),
                Suite::Construction => construction_suite(&mut rec, lib),
                Suite::Sim => sim_suite(&mut rec),
            },
        }
        report.checks.extend(rec.out);
    }
    report
}

/// Split spectrum of every row against exhaustive enumeration.
pub fn oracle_mismatches(
    split: &SplitSpectrumTable,
    rows: impl IntoIterator<Item = usize>,
) -> Result<Vec<String>> {
    let n = split.length();
    let guard = EnumerationGuard::default();
    let mut bad = Vec::new();
    for i in rows {
        for (label, id, grid) in [
            ("polar", SubcodeId::polar(n, i)?, split.polar_row(i)?),
            ("subcode", SubcodeId::subcode(n, i)?, split.subcode_row(i)?),
        ] {
            let oracle = brute_force_split_spectrum(&id, 2, &guard)?;
            let mut engine_total = BigUint::default();
            for (j, k, count) in grid.iter_nonzero() {
                engine_total += count;
                let want = oracle.get(&vec![j, k]).copied().unwrap_or(0);
                if count != &BigUint::from(want) {
                    bad.push(format!(
                        "N={n} {label} i={i} ({j},{k}): engine {count}, oracle {want}"
                    ));
                }
            }
            let oracle_total: u64 = oracle.values().sum();
            if engine_total != BigUint::from(oracle_total) {
                bad.push(format!(
                    "N={n} {label} i={i}: totals {engine_total} vs {oracle_total}"
                ));
            }
        }
    }
    Ok(bad)
}

fn spectrum_suite(rec: &mut Recorder, lib: &SpectrumLibrary, opts: &VerifyOptions) {
    rec.check(
        "known N=16 entries",
        (|| {
            let split = lib.split(16)?;
            for &(i, j, k, want) in KNOWN_N16_SPLIT {
                let got = split.polar(i, j, k)?;
                if got != BigUint::from(want) {
                    return fail(format!("A^({i})({j},{k}) = {got}, expected {want}"));
                }
            }
            pass(format!("{} entries", KNOWN_N16_SPLIT.len()))
        })(),
    );

    for e in 1..=opts.oracle_exponent {
        let n = 1usize << e;
        rec.check(
            &format!("oracle N={n}"),
            (|| {
                let bad = oracle_mismatches(lib.split(n)?, 1..=n)?;
                if bad.is_empty() {
                    pass(format!("{n} rows match"))
                } else {
                    fail(bad.join("; "))
                }
            })(),
        );
    }

    rec.check(
        "row totals",
        (|| {
            for n in lib.spectrum_lengths() {
                let t = lib.spectrum(n)?;
                for i in 1..=n {
                    let total: BigUint = t.polar_row(i)?.iter().sum();
                    if total != BigUint::one() << (n - i) {
                        return fail(format!("N={n} i={i}: total {total}"));
                    }
                }
            }
            pass("2^(N-i) words per row")
        })(),
    );

    rec.check(
        "marginals",
        (|| {
            for n in lib.split_lengths() {
                let m = lib.split(n)?.marginal();
                if &m != lib.spectrum(n)? {
                    return fail(format!("N={n}: split marginal differs from 1-D table"));
                }
            }
            pass("split marginals equal 1-D tables")
        })(),
    );

    if let Some(dir) = &opts.cache_dir {
        rec.check("cache files", check_cache_dir(dir));
    }
}

fn check_cache_dir(dir: &Path) -> Outcome {
    let mut names: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    let mut problems = Vec::new();
    for path in &names {
        let text = fs::read_to_string(path)?;
        let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        let res = if name.starts_with("split-N") {
            SplitSpectrumTable::from_cache_str(&text, path).map(|_| ())
        } else if name.starts_with("spectrum-N") {
            SpectrumTable::from_cache_str(&text, path).map(|_| ())
        } else {
            Ok(())
        };
        if let Err(e) = res {
            problems.push(e.to_string());
        }
    }
    if problems.is_empty() {
        pass(format!("{} files valid", names.len()))
    } else {
        fail(problems.join("; "))
    }
}

fn bounds_suite(rec: &mut Recorder, lib: &SpectrumLibrary) {
    rec.check(
        "pattern probabilities sum to one",
        (|| {
            let mut worst = 0.0f64;
            for (l, m) in [(2usize, 8usize), (4, 8), (8, 4), (4, 64)] {
                for d in 0..=16 {
                    let pats = enumerate_patterns(l, m, d);
                    let exact: BigRational = pats.iter().map(pattern_probability_exact).sum();
                    if exact != BigRational::one() {
                        return fail(format!("L={l} M={m} d={d}: rational sum {exact}"));
                    }
                    let approx: f64 = pats.iter().map(|p| ln_pattern_probability(p).exp()).sum();
                    worst = worst.max((approx - 1.0).abs());
                }
            }
            if worst <= 1e-12 {
                pass(format!("max log-path error {worst:.2e}"))
            } else {
                fail(format!("log-path error {worst:.2e} exceeds 1e-12"))
            }
        })(),
    );

    rec.check(
        "single block is the classical bound",
        (|| {
            let t = lib.spectrum(16)?;
            let snr = SnrPoint::new(2.0)?;
            for i in 1..=16 {
                let got = channel_error_bound_random(t, i, 1, 16, snr, Some(16))?.raw();
                let direct: f64 = t
                    .polar_row(i)?
                    .iter()
                    .enumerate()
                    .map(|(d, a)| a.to_f64().unwrap_or(f64::INFINITY) / (1.0 + 2.0 * d as f64))
                    .sum();
                if (got / direct - 1.0).abs() > 1e-12 {
                    return fail(format!("i={i}: {got} vs {direct}"));
                }
            }
            pass("16 rows")
        })(),
    );
}

fn construction_suite(rec: &mut Recorder, lib: &SpectrumLibrary) {
    rec.check(
        "pdw values",
        (|| {
            let g1 = SnrPoint::new(1.0)?;
            let cases = [
                (pdw_block(lib.split(16)?, 16, g1)?, -16.0),
                (pdw_block(lib.split(16)?, 9, g1)?, 8f64.ln() - 2.0),
                (pdw_block(lib.split(4)?, 3, SnrPoint::new(0.5)?)?, 2f64.ln() - 1.0),
                (pdw_random(lib.spectrum(4)?, 4, 2, 2, g1)?, -4.0),
            ];
            for (got, want) in cases {
                if (got - want).abs() > 1e-12 {
                    return fail(format!("{got} vs {want}"));
                }
            }
            pass("4 values")
        })(),
    );

    rec.check(
        "rankings are nested permutations",
        (|| {
            for metric in [Metric::PdwBlock, Metric::PdwRandom, Metric::Ga] {
                let r = rank(metric, &ConstructionParams::new(16, 2, 0.0), Some(lib))?;
                let mut sorted = r.order.clone();
                sorted.sort_unstable();
                if sorted != (1..=16).collect::<Vec<_>>() {
                    return fail(format!("{metric}: order is not a permutation"));
                }
                for k in 0..16 {
                    let (a, b) = (r.info_set(k)?, r.info_set(k + 1)?);
                    if !a.iter().all(|x| b.contains(x)) {
                        return fail(format!("{metric}: info sets not nested at K={k}"));
                    }
                }
                if metric == Metric::PdwBlock && r.info_set(1)? != vec![16] {
                    return fail("pdw-block K=1 does not pick channel 16");
                }
            }
            pass("pdw-block, pdw-random, ga")
        })(),
    );

    rec.check("ga polarizes toward the last channel", {
        let m = ga_means(8, 2.0);
        let best = (0..8).max_by(|&a, &b| m[a].total_cmp(&m[b])).unwrap_or(0);
        if best == 7 {
            pass("channel 8 strongest")
        } else {
            fail(format!("channel {} strongest", best + 1))
        }
    });
}

fn sim_suite(rec: &mut Recorder) {
    let spec = || {
        CodeSpec::new(
            32,
            [16, 24, 28, 30, 31, 32, 20, 22, 23, 26, 27, 29, 12, 14, 15, 8],
        )
    };

    rec.check(
        "list of one equals SC",
        (|| {
            let spec = spec()?;
            let mut rng = trial_rng(11, 0, 0);
            for t in 0..1000 {
                let llrs: Vec<f64> = (0..32).map(|_| rng.random_range(-3.0..5.0)).collect();
                if scl_decode(&spec, &llrs, 1)? != sc_decode(&spec, &llrs)? {
                    return fail(format!("trial {t} differs"));
                }
            }
            pass("1000 trials")
        })(),
    );

    rec.check(
        "noiseless recovery",
        (|| {
            let spec = spec()?;
            let mut rng = trial_rng(12, 0, 0);
            for _ in 0..200 {
                let info: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2u8)).collect();
                let x = encode(&spec, &info)?;
                let llrs: Vec<f64> = x
                    .bits()
                    .iter()
                    .map(|&b| if b == 1 { -20.0 } else { 20.0 })
                    .collect();
                if sc_decode(&spec, &llrs)?.info_bits != info
                    || scl_decode(&spec, &llrs, 4)?.info_bits != info
                {
                    return fail("decoder missed a noiseless word");
                }
            }
            pass("200 words, SC and SCL")
        })(),
    );

    rec.check(
        "reports independent of worker count",
        (|| {
            let mut cfg = SimConfig::new(spec()?, MappingSpec::block(32, 2)?, vec![2.0, 8.0], 13);
            cfg.stop = StopRule {
                max_trials: 2000,
                target_errors: 40,
            };
            let run = |threads: usize| -> Result<_> {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::invalid(e.to_string()))?;
                pool.install(|| run_bler(&cfg))
            };
            if run(1)? == run(4)? {
                pass("1 and 4 workers agree")
            } else {
                fail("reports differ")
            }
        })(),
    );
}
