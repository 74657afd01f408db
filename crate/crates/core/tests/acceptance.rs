//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits zero after reporting unless `ACCEPTANCE_STRICT` is set, in which case any FAIL
//! makes the process fail.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use polarfade::bounds::{
    bler_bound_block, bler_bound_random, enumerate_patterns, ln_pattern_probability, low_snr_bound_block,
    low_snr_bound_random, pattern_probability_exact, BoundValue,
};
use polarfade::construction::{rank, ConstructionParams, Metric};
use polarfade::sim::rng::trial_rng;
use polarfade::sim::{
    genie_channel_errors, llr, run_bler, sc_decode, scl_decode, transmit, ChannelHooks, CheckNode,
    DecoderConfig, InterleaverPolicy, MappingSpec, SimConfig, SimPoint, SimReport, StopRule,
};
use polarfade::spectrum::{build_tables, SpectrumLibrary, TableConfig};
use polarfade::verify::{oracle_mismatches, KNOWN_N16_SPLIT};
use polarfade::{encode, BitBlock, CodeSpec, Error, SnrPoint};

type Res<T> = std::result::Result<T, Error>;

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

struct Run {
    passed: usize,
    failed: Vec<usize>,
}

impl Run {
    fn criterion(&mut self, id: usize, title: &str, budget: Duration, body: impl FnOnce() -> Res<Outcome>) {
        let start = Instant::now();
        let outcome = body().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let took = start.elapsed();
        let in_time = took <= budget;
        let ok = outcome.passed && in_time;
        let timing = if in_time {
            format!("{:.1} s", took.as_secs_f64())
        } else {
            format!(
                "{:.1} s, over the {} s budget",
                took.as_secs_f64(),
                budget.as_secs()
            )
        };
        println!(
            "{} criterion {id} ({title}): {} [{timing}]",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail
        );
        for n in &outcome.notes {
            println!("    {n}");
        }
        std::io::stdout().flush().ok();
        if ok {
            self.passed += 1;
        } else {
            self.failed.push(id);
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn table_i() -> Res<Outcome> {
    let lib = SpectrumLibrary::build(4)?;
    let split = lib.split(16)?;
    let mut wrong = Vec::new();
    for &(i, j, k, want) in KNOWN_N16_SPLIT {
        let got = split.polar(i, j, k)?;
        if got != BigUint::from(want) {
            wrong.push(format!("A^({i})({j},{k})={got} not {want}"));
        }
    }
    Ok(if wrong.is_empty() {
        Outcome::new(true, format!("all {} entries exact", KNOWN_N16_SPLIT.len()))
    } else {
        Outcome::new(false, wrong.join(", "))
    })
}

fn oracle() -> Res<Outcome> {
    let lib = SpectrumLibrary::build(5)?;
    let mut bad = Vec::new();
    for n in [2usize, 4, 8, 16] {
        bad.extend(oracle_mismatches(lib.split(n)?, 1..=n)?);
    }
    bad.extend(oracle_mismatches(lib.split(32)?, 20..=32)?);
    Ok(if bad.is_empty() {
        Outcome::new(
            true,
            "N=2,4,8,16 all rows and N=32 rows 20..=32 match enumeration",
        )
    } else {
        Outcome::new(false, format!("{} mismatches, first: {}", bad.len(), bad[0]))
    })
}

fn structure(lib: &SpectrumLibrary) -> Res<Outcome> {
    let mut failures = Vec::new();
    let mut lengths = Vec::new();
    let mut fourfold_breaks = Vec::new();
    for n in lib.split_lengths().filter(|&n| n <= 128).collect::<Vec<_>>() {
        lengths.push(n);
        let split = lib.split(n)?;
        let mut checks = vec![
            common::chain_identity(split),
            common::diagonal_rows(split),
            common::flip_swap_symmetry(split),
            common::row_totals(split),
        ];
        if &split.marginal() != lib.spectrum(n)? {
            checks.push(Err(format!("N={n}: marginal differs from the 1-D table")));
        }
        if n <= 16 {
            checks.push(common::duality_involution(split));
        }
        failures.extend(checks.into_iter().filter_map(|c| c.err()));
        let breaks = common::unrestricted_fourfold_breaks(split);
        fourfold_breaks.push(format!("N={n}: {}", breaks.len()));
    }
    for n in lib.spectrum_lengths().filter(|&n| n <= 128) {
        let t = lib.spectrum(n)?;
        for i in 1..=n {
            let total: BigUint = t.polar_row(i)?.iter().sum();
            if total != BigUint::one() << (n - i) {
                failures.push(format!("N={n} i={i}: 1-D total {total}"));
            }
        }
    }
    let mut out = if failures.is_empty() {
        Outcome::new(
            true,
            format!(
                "N in {lengths:?}: chain identity, diagonal rows i > N/2, flip/swap symmetry, totals, marginals; duality round trip for N <= 16"
            ),
        )
    } else {
        Outcome::new(false, failures.join("; "))
    };
    out.notes.push(format!(
        "flip/swap symmetry is checked where it holds (single flips i < N/2 for A and i <= N/2 for S, swap i <= N/2, double flip except A^(N)); rows violating the unrestricted four-fold form: {}",
        fourfold_breaks.join(", ")
    ));
    Ok(out)
}

fn normalization() -> Res<Outcome> {
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (l, m) in [(2usize, 8usize), (4, 8), (8, 4), (4, 64)] {
        for d in 0..=16 {
            let pats = enumerate_patterns(l, m, d);
            let exact: BigRational = pats.iter().map(pattern_probability_exact).sum();
            if exact != BigRational::one() {
                bad.push(format!("L={l} M={m} d={d}: {exact}"));
            }
            let approx: f64 = pats.iter().map(|p| ln_pattern_probability(p).exp()).sum();
            worst = worst.max((approx - 1.0).abs());
        }
    }
    Ok(Outcome::new(
        bad.is_empty() && worst <= 1e-12,
        format!(
            "rational sums exact in {}/68 cases, worst log-path error {worst:.2e}",
            68 - bad.len()
        ),
    ))
}

fn sim(code: &CodeSpec, mapping: MappingSpec, snr_db: Vec<f64>, seed: u64, stop: StopRule) -> Res<SimReport> {
    let mut cfg = SimConfig::new(code.clone(), mapping, snr_db, seed);
    cfg.stop = stop;
    run_bler(&cfg)
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    polarfade::sim::snr_grid(start, stop, step).expect("grid")
}

fn dominance(lib: &SpectrumLibrary) -> Res<Outcome> {
    let (n, k) = (64usize, 32usize);
    let snrs = grid(0.0, 12.0, 2.0);
    let mut qualifying = 0usize;
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    let mut min_bound = f64::INFINITY;
    for blocks in [1usize, 2] {
        let code = rank(
            Metric::PdwBlock,
            &ConstructionParams::new(n, blocks, 3.0),
            Some(lib),
        )?
        .code(k)?;
        let report = sim(
            &code,
            MappingSpec::block(n, blocks)?,
            snrs.clone(),
            64 + blocks as u64,
            StopRule::default(),
        )?;
        let mut row = Vec::new();
        for p in &report.points {
            let snr = SnrPoint::from_db(p.snr_db)?;
            let bound: BoundValue = if blocks == 1 {
                bler_bound_random(lib.spectrum(n)?, &code, 1, n, snr, None)?
            } else {
                bler_bound_block(lib.split(n)?, &code, snr, None)?
            };
            min_bound = min_bound.min(bound.raw());
            row.push(format!(
                "{:.0} dB: MC {:.2e}, bound {:.2e}",
                p.snr_db,
                p.bler,
                bound.raw()
            ));
            if bound.clipped() < 1.0 {
                qualifying += 1;
                if p.bler > bound.clipped() + 2.0 * p.sigma() {
                    violations.push(format!("L={blocks} {:.0} dB", p.snr_db));
                }
            }
        }
        notes.push(format!("L={blocks}: {}", row.join("; ")));
    }
    let detail = if qualifying == 0 {
        format!(
            "vacuous: the clipped truncated bound is 1 at all 14 points (smallest raw bound {min_bound:.2e}), so no point qualifies"
        )
    } else if violations.is_empty() {
        format!("{qualifying} qualifying points, all dominated")
    } else {
        format!(
            "{qualifying} qualifying points, violated at {}",
            violations.join(", ")
        )
    };
    let mut out = Outcome::new(violations.is_empty(), detail);
    out.notes = notes;
    Ok(out)
}

struct Curve {
    label: &'static str,
    points: Vec<SimPoint>,
}

fn slope_of(c: &Curve) -> Option<f64> {
    common::diversity_slope(&common::top_span(&c.points, 6.0))
}

fn describe(c: &Curve) -> String {
    let pts: Vec<String> = c
        .points
        .iter()
        .map(|p| format!("{:.0}:{:.2e}({})", p.snr_db, p.bler, p.block_errors))
        .collect();
    format!("{}: {}", c.label, pts.join(" "))
}

fn slopes(lib: &SpectrumLibrary) -> Res<Outcome> {
    let (n, k) = (256usize, 64usize);
    let stop = StopRule::default();
    let code = |metric: Metric, blocks: usize, full: bool| -> Res<CodeSpec> {
        let mut p = ConstructionParams::new(n, blocks, 0.0);
        p.require_full_diversity = full;
        rank(metric, &p, Some(lib))?.code(k)
    };
    let l1 = Curve {
        label: "L=1",
        points: sim(
            &code(Metric::PdwBlock, 1, false)?,
            MappingSpec::block(n, 1)?,
            grid(12.0, 24.0, 2.0),
            61,
            stop,
        )?
        .points,
    };
    let l2 = Curve {
        label: "L=2 block",
        points: sim(
            &code(Metric::PdwBlock, 2, false)?,
            MappingSpec::block(n, 2)?,
            grid(6.0, 18.0, 2.0),
            62,
            stop,
        )?
        .points,
    };
    let l4 = Curve {
        label: "L=4 random",
        points: sim(
            &code(Metric::PdwRandom, 4, false)?,
            MappingSpec::random(n, 4, InterleaverPolicy::Fresh)?,
            grid(0.0, 8.0, 2.0),
            64,
            stop,
        )?
        .points,
    };
    let l2_full = Curve {
        label: "L=2 block, full-diversity filter",
        points: sim(
            &code(Metric::PdwBlock, 2, true)?,
            MappingSpec::block(n, 2)?,
            grid(4.0, 14.0, 2.0),
            62,
            stop,
        )?
        .points,
    };
    let s: Vec<Option<f64>> = [&l1, &l2, &l4, &l2_full].iter().map(|c| slope_of(c)).collect();
    let (Some(s1), Some(s2), Some(s4), s2f) = (s[0], s[1], s[2], s[3]) else {
        return Ok(Outcome::new(false, "too few error events to fit a slope"));
    };
    let (r2, r4) = (s2 / s1, s4 / s1);
    let passed = (1.6..=2.4).contains(&r2) && r4 >= 2.5;
    let mut out = Outcome::new(
        passed,
        format!(
            "slopes L1 {s1:.2}, L2 {s2:.2}, L4 {s4:.2}; L2/L1 = {r2:.2} (need 1.6..2.4), L4/L1 = {r4:.2} (need >= 2.5)"
        ),
    );
    if let Some(f) = s2f {
        out.notes.push(format!(
            "with the full-diversity filter the L=2 slope is {f:.2}, ratio {:.2}",
            f / s1
        ));
    }
    out.notes
        .extend([&l1, &l2, &l4, &l2_full].iter().map(|c| describe(c)));
    Ok(out)
}

fn parity(lib: &SpectrumLibrary) -> Res<Outcome> {
    let (n, k) = (256usize, 64usize);
    let stop = StopRule {
        max_trials: 200_000,
        target_errors: 200,
    };
    let params = ConstructionParams::new(n, 2, 0.0);
    let snrs = grid(2.0, 14.0, 1.0);
    let block = MappingSpec::block(n, 2)?;
    let run = |metric: Metric, map: &MappingSpec, label: &'static str| -> Res<Curve> {
        let code = rank(metric, &params, Some(lib))?.code(k)?;
        Ok(Curve {
            label,
            points: sim(&code, map.clone(), snrs.clone(), 71, stop)?.points,
        })
    };
    let pdw = run(Metric::PdwBlock, &block, "pdw-block")?;
    let ga = run(Metric::Ga, &block, "ga")?;
    let pdw_r = run(Metric::PdwRandom, &block, "pdw-random")?;
    let pdw_r_int = run(
        Metric::PdwRandom,
        &MappingSpec::random(n, 2, InterleaverPolicy::Fresh)?,
        "pdw-random, interleaved",
    )?;
    let x = |c: &Curve| common::crossing_db(&c.points, 1e-2);
    let (Some(xp), Some(xg), Some(xr)) = (x(&pdw), x(&ga), x(&pdw_r)) else {
        return Ok(Outcome::new(false, "a curve never crosses BLER 1e-2 on the grid"));
    };
    let passed = (xp - xg).abs() <= 0.5 && (xr - xp).abs() <= 0.5;
    let mut out = Outcome::new(
        passed,
        format!(
            "BLER 1e-2 at pdw-block {xp:.2} dB, ga {xg:.2} dB (gap {:+.2}), pdw-random {xr:.2} dB (gap {:+.2}); tolerance 0.5 dB",
            xp - xg,
            xr - xp
        ),
    );
    if let Some(xi) = x(&pdw_r_int) {
        out.notes
            .push(format!("pdw-random under random mapping crosses at {xi:.2} dB"));
    }
    out.notes
        .extend([&pdw, &ga, &pdw_r, &pdw_r_int].iter().map(|c| describe(c)));
    Ok(out)
}

fn decoders(lib: &SpectrumLibrary) -> Res<Outcome> {
    let n = 256;
    let code = rank(Metric::PdwBlock, &ConstructionParams::new(n, 2, 0.0), Some(lib))?.code(64)?;
    let map = MappingSpec::block(n, 2)?;
    let zero = BitBlock::zeros(n);
    let mut differ = 0usize;
    for t in 0..10_000u64 {
        let mut rng = trial_rng(81, 0, t);
        let snr = SnrPoint::from_db(rng.random_range(-2.0..16.0))?;
        let tx = transmit(&zero, &map, snr, &mut rng, ChannelHooks::default())?;
        let l = llr(&tx, &map, snr);
        if scl_decode(&code, &l, 1)? != sc_decode(&code, &l)? {
            differ += 1;
        }
    }

    let mut missed = 0usize;
    let mut rng = trial_rng(82, 0, 0);
    for e in 1..=8u32 {
        let n = 1usize << e;
        for _ in 0..50 {
            let info: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
            let spec = CodeSpec::new(n, info)?;
            let bits: Vec<u8> = (0..spec.k()).map(|_| rng.random_range(0..2u8)).collect();
            let x = encode(&spec, &bits)?;
            let l: Vec<f64> = x
                .bits()
                .iter()
                .map(|&b| if b == 1 { -30.0 } else { 30.0 })
                .collect();
            if sc_decode(&spec, &l)?.info_bits != bits || scl_decode(&spec, &l, 8)?.info_bits != bits {
                missed += 1;
            }
        }
    }

    let mut cfg = SimConfig::new(
        code.clone(),
        MappingSpec::random(n, 4, InterleaverPolicy::Fresh)?,
        vec![0.0, 4.0],
        83,
    );
    cfg.stop = StopRule {
        max_trials: 3000,
        target_errors: 100,
    };
    let mut reports = Vec::new();
    for (threads, decoder) in [
        (1, DecoderConfig::sc()),
        (3, DecoderConfig::sc()),
        (1, DecoderConfig::scl(4)),
        (4, DecoderConfig::scl(4)),
    ] {
        cfg.decoder = decoder;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        reports.push(pool.install(|| run_bler(&cfg))?);
    }
    let deterministic = reports[0] == reports[1] && reports[2] == reports[3];

    Ok(Outcome::new(
        differ == 0 && missed == 0 && deterministic,
        format!(
            "SCL(1) vs SC: {differ}/10000 differ; noiseless recovery misses: {missed}/400; reports identical across worker counts: {deterministic}"
        ),
    ))
}

fn low_snr(lib: &SpectrumLibrary) -> Res<Outcome> {
    let n = 16;
    let snr = SnrPoint::new(0.1)?;
    let trials = 100_000;
    let block = genie_channel_errors(&MappingSpec::block(n, 2)?, snr, trials, 91, CheckNode::Exact)?;
    let random = genie_channel_errors(
        &MappingSpec::random(n, 2, InterleaverPolicy::Fresh)?,
        snr,
        trials,
        92,
        CheckNode::Exact,
    )?;
    let mut ok = true;
    let mut parts = Vec::new();
    for i in [9usize, 12, 16] {
        for (name, bound, mc) in [
            ("block", low_snr_bound_block(lib.split(n)?, i, snr, None), &block),
            (
                "random",
                low_snr_bound_random(lib.spectrum(n)?, i, 2, 8, snr, None),
                &random,
            ),
        ] {
            let (p, s) = (mc.rate(i), mc.sigma(i));
            match bound {
                Ok(b) if b.raw().is_finite() && b.raw() >= p - 2.0 * s => {
                    parts.push(format!("i={i} {name}: {:.3e} >= {p:.3e}", b.raw()));
                }
                Ok(b) => {
                    ok = false;
                    parts.push(format!(
                        "i={i} {name}: {:.3e} < {p:.3e} - 2σ ({} terms skipped)",
                        b.raw(),
                        b.skipped_terms
                    ));
                }
                Err(e) => {
                    ok = false;
                    parts.push(format!("i={i} {name}: {e}"));
                }
            }
        }
    }
    Ok(Outcome::new(ok, parts.join("; ")))
}

fn main() {
    let start = Instant::now();
    let mut run = Run {
        passed: 0,
        failed: Vec::new(),
    };
    run.criterion(1, "split spectrum reference entries", secs(1), table_i);
    run.criterion(2, "oracle equivalence", secs(120), oracle);

    let lib = match build_tables(&TableConfig::up_to(8)) {
        Ok(lib) => lib,
        Err(e) => {
            println!("FAIL tables up to N=256 could not be built: {e}");
            std::process::exit(1);
        }
    };
    run.criterion(3, "structural invariants", secs(600), || structure(&lib));
    run.criterion(4, "pattern probability normalization", secs(60), normalization);
    run.criterion(5, "bound dominance", secs(900), || dominance(&lib));
    run.criterion(6, "diversity slope", secs(3600), || slopes(&lib));
    run.criterion(7, "construction parity", secs(3600), || parity(&lib));
    run.criterion(8, "decoder contracts", secs(600), || decoders(&lib));
    run.criterion(9, "low-SNR bounds", secs(600), || low_snr(&lib));

    println!(
        "acceptance: {}/9 passed, failed {:?} ({:.0} s)",
        run.passed,
        run.failed,
        start.elapsed().as_secs_f64()
    );
    if !run.failed.is_empty() && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
