use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polarfade::construction::{
    default_design_snr_db, rank, ConstructionParams, Metric, PdwVariant, RankingResult,
};
use polarfade::experiment::{bound_curve, preset, run_experiment, tables_for, to_csv, ExperimentConfig};
use polarfade::sim::{
    run_bler, snr_grid, CheckNode, DecoderConfig, InterleaverPolicy, MappingKind, MappingSpec, Payload,
    SimConfig, StopRule,
};
use polarfade::spectrum::{obtain_tables, save_tables, SpectrumLibrary, TableConfig};
use polarfade::verify::{verify, Suite, VerifyOptions};
use polarfade::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

const VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "polarfade",
    version,
    about = "Polar codes for block Rayleigh fading channels"
)]
struct Cli {
    /// Spectrum cache directory.
    #[arg(long, global = true, env = "POLARFADE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, query or check spectrum tables.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Rank polarized channels and pick an information set.
    Construct(ConstructArgs),
    /// Evaluate BLER union bounds.
    Bound(BoundArgs),
    /// Monte-Carlo BLER simulation.
    Simulate(SimulateArgs),
    /// Run a config-driven experiment.
    Experiment(ExperimentArgs),
    /// Run self-check suites.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum SpectrumCmd {
    Build {
        #[arg(long)]
        nmax: u32,
        /// Largest exponent with split tables (defaults to min(nmax, 8)).
        #[arg(long)]
        split_nmax: Option<u32>,
        /// Output directory; defaults to the cache directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Query {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        d1: usize,
        /// Omit for the 1-D spectrum `A(d1)`.
        #[arg(long)]
        d2: Option<usize>,
    },
    Verify {
        /// Cross-check against exhaustive enumeration for N <= 16.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_parser = parse_metric)]
    metric: Metric,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "L", default_value_t = 2)]
    blocks: usize,
    /// Defaults to 0 dB below rate 1/2, 3 dB otherwise.
    #[arg(long, allow_hyphen_values = true)]
    design_snr_db: Option<f64>,
    #[arg(long)]
    require_full_diversity: bool,
    /// Combine minimum-weight terms by sum instead of max.
    #[arg(long)]
    full_sum: bool,
    /// Mapping simulated by the mc metric.
    #[arg(long, default_value = "block", value_parser = parse_mapping)]
    mc_map: MappingKind,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_parser = parse_mapping)]
    mode: MappingKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    rate: f64,
    #[arg(long = "L", default_value_t = 2)]
    blocks: usize,
    /// Comma-separated list or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    snr_db: String,
    #[arg(long)]
    dmax: Option<usize>,
    /// Ranking JSON to take the information set from; PDW for `--mode` otherwise.
    #[arg(long)]
    metric_file: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    metric_file: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "L", default_value_t = 2)]
    blocks: usize,
    #[arg(long, default_value = "block")]
    map: String,
    #[arg(long, default_value = "sc")]
    decoder: String,
    #[arg(long, default_value_t = 8)]
    list: usize,
    #[arg(long)]
    min_sum: bool,
    #[arg(long)]
    fixed_interleaver: bool,
    /// Send the all-zero codeword (forced under random mapping).
    #[arg(long)]
    all_zero: bool,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 200)]
    target_errors: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Config file.
    config: Option<PathBuf>,
    /// Bundled config instead of a file: fig2a, fig3 or long-n1024.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    target_errors: Option<u64>,
    /// Print the planned curves and exit.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// spectrum, bounds, construction or sim; all when omitted.
    #[arg(long = "suite", value_parser = parse_suite)]
    suites: Vec<Suite>,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mapping(s: &str) -> std::result::Result<MappingKind, String> {
    match s {
        "block" => Ok(MappingKind::Block),
        "random" => Ok(MappingKind::Random),
        _ => Err(format!("unknown mapping `{s}` (block or random)")),
    }
}

fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad SNR `{x}`")))
        };
        return snr_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?);
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad SNR `{x}`")))
        })
        .collect()
}

fn exponent_of(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!("N={n} must be a power of two >= 2")));
    }
    Ok(n.trailing_zeros())
}

fn tables(n: usize, split: bool, cache: Option<&Path>) -> Result<SpectrumLibrary> {
    let e = exponent_of(n)?;
    let cfg = TableConfig {
        split_max_exponent: if split { e } else { 0 },
        spectrum_max_exponent: e,
        exploit_symmetry: true,
    };
    obtain_tables(&cfg, cache)
}

fn hash_of<T: Serialize>(value: &T) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(value).expect("serializable")))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn spectrum(cmd: SpectrumCmd, cache: Option<&Path>) -> Result<ExitCode> {
    match cmd {
        SpectrumCmd::Build {
            nmax,
            split_nmax,
            out,
        } => {
            let cfg = TableConfig {
                split_max_exponent: split_nmax.unwrap_or(nmax.min(8)),
                spectrum_max_exponent: nmax,
                exploit_symmetry: true,
            };
            let dir = out
                .or_else(|| cache.map(Path::to_path_buf))
                .ok_or_else(|| Error::InvalidInput("give --out or set POLARFADE_CACHE_DIR".into()))?;
            let lib = polarfade::spectrum::build_tables(&cfg)?;
            for p in save_tables(&lib, &dir)? {
                println!("{}", p.display());
            }
        }
        SpectrumCmd::Query { n, i, d1, d2 } => {
            let lib = tables(n, d2.is_some(), cache)?;
            let count = match d2 {
                Some(d2) => lib.split(n)?.polar(i, d1, d2)?,
                None => lib.spectrum(n)?.polar(i, d1)?,
            };
            println!("{count}");
        }
        SpectrumCmd::Verify { oracle } => {
            let opts = VerifyOptions {
                oracle_exponent: if oracle { 4 } else { 0 },
                cache_dir: cache.filter(|d| d.is_dir()).map(Path::to_path_buf),
            };
            return report(verify(&[Suite::Spectrum], &opts));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report(r: polarfade::verify::VerifyReport) -> Result<ExitCode> {
    println!("{}", serde_json::to_string_pretty(&r)?);
    for c in r.failures() {
        eprintln!("FAIL {} / {}: {}", c.suite, c.name, c.detail);
    }
    Ok(if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAILED)
    })
}

fn construct(a: ConstructArgs, cache: Option<&Path>) -> Result<ExitCode> {
    let design = a
        .design_snr_db
        .unwrap_or_else(|| default_design_snr_db(a.k as f64 / a.n as f64));
    let params = ConstructionParams {
        length: a.n,
        blocks: a.blocks,
        design_snr_db: design,
        variant: if a.full_sum {
            PdwVariant::FullSum
        } else {
            PdwVariant::Max
        },
        require_full_diversity: a.require_full_diversity,
        mc_mapping: a.mc_map,
        trials: a.trials,
        seed: a.seed,
    };
    let needs_tables = matches!(a.metric, Metric::PdwBlock | Metric::PdwRandom) || a.require_full_diversity;
    let lib = if needs_tables {
        Some(tables(a.n, a.blocks == 2, cache)?)
    } else {
        None
    };
    let ranking = rank(a.metric, &params, lib.as_ref())?;
    let mut json = ranking.to_json(a.k)?;
    json["config_hash"] = hash_of(&params).into();
    write_out(&a.out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn read_ranking(path: &Path) -> Result<RankingResult> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn bound(a: BoundArgs, cache: Option<&Path>) -> Result<ExitCode> {
    let k = (a.rate * a.n as f64).round() as usize;
    let grid = parse_snr_list(&a.snr_db)?;
    let block_split = a.mode == MappingKind::Block && a.blocks == 2;
    let lib = tables(a.n, block_split, cache)?;
    let ranking = match &a.metric_file {
        Some(p) => read_ranking(p)?,
        None => {
            let metric = if block_split || a.blocks == 1 {
                Metric::PdwBlock
            } else {
                Metric::PdwRandom
            };
            let params = ConstructionParams::new(a.n, a.blocks, default_design_snr_db(a.rate));
            rank(metric, &params, Some(&lib))?
        }
    };
    let code = ranking.code(k)?;
    let pts = bound_curve(&lib, &code, a.mode, a.blocks, &grid, a.dmax)?;
    let hash = hash_of(&(a.mode, a.n, k, a.blocks, &grid, a.dmax, code.info_set()));
    write_out(&a.out, &to_csv(&pts, Some(&hash))?)?;
    Ok(ExitCode::SUCCESS)
}

fn simulate(a: SimulateArgs) -> Result<ExitCode> {
    let ranking = read_ranking(&a.metric_file)?;
    if ranking.length() != a.n {
        return Err(Error::InvalidInput(format!(
            "ranking covers N={} but --n is {}",
            ranking.length(),
            a.n
        )));
    }
    let code = ranking.code(a.k)?;
    let kind = parse_mapping(&a.map).map_err(Error::InvalidInput)?;
    let policy = if a.fixed_interleaver {
        InterleaverPolicy::Fixed(a.seed)
    } else {
        InterleaverPolicy::Fresh
    };
    let map = MappingSpec::new(kind, a.n, a.blocks, policy)?;
    let mut cfg = SimConfig::new(code, map, parse_snr_list(&a.snr_db)?, a.seed);
    let rule = if a.min_sum {
        CheckNode::MinSum
    } else {
        CheckNode::Exact
    };
    cfg.decoder = match a.decoder.as_str() {
        "sc" => DecoderConfig::sc(),
        "scl" => DecoderConfig::scl(a.list),
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown decoder `{other}` (sc or scl)"
            )))
        }
    }
    .with_rule(rule);
    cfg.stop = StopRule {
        max_trials: a.max_trials,
        target_errors: a.target_errors,
    };
    cfg.payload = match (a.all_zero, kind) {
        (false, _) => Payload::RandomData,
        (true, MappingKind::Block) => Payload::AllZero,
        (true, MappingKind::Random) => Payload::AllZeroForced,
    };
    let report = run_bler(&cfg)?;
    for p in &report.points {
        eprintln!(
            "{:>6.2} dB  bler {:.3e}  ({} / {})",
            p.snr_db, p.bler, p.block_errors, p.trials
        );
    }
    write_out(&a.out, &to_csv(&report.points, Some(&hash_of(&a)))?)?;
    Ok(ExitCode::SUCCESS)
}

fn experiment(a: ExperimentArgs, cache: Option<&Path>) -> Result<ExitCode> {
    let mut cfg = match (&a.config, &a.preset) {
        (Some(path), _) => ExperimentConfig::from_file(path)?,
        (None, Some(name)) => {
            let text = preset(name).ok_or_else(|| Error::InvalidInput(format!("unknown preset `{name}`")))?;
            ExperimentConfig::from_toml_str(text, Path::new(name))?
        }
        (None, None) => return Err(Error::InvalidInput("give a config file or --preset".into())),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.max_trials {
        cfg.stop.max_trials = t;
    }
    if let Some(e) = a.target_errors {
        cfg.stop.target_errors = e;
    }
    if a.dry_run {
        for c in cfg.curves() {
            println!("{}", c.label);
        }
        return Ok(ExitCode::SUCCESS);
    }
    if cfg.long_running {
        eprintln!("note: `{}` is a long-running preset", cfg.name);
    }
    let out_dir = a.out_dir.unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    let lib = tables_for(&cfg, cache)?;
    let out = run_experiment(&cfg, &lib, &out_dir, &mut |line| eprintln!("{line}"))?;
    println!("{}", out.manifest.display());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cache = cli.cache_dir.as_deref();
    match cli.command {
        Command::Spectrum(cmd) => spectrum(cmd, cache),
        Command::Construct(a) => construct(a, cache),
        Command::Bound(a) => bound(a, cache),
        Command::Simulate(a) => simulate(a),
        Command::Experiment(a) => experiment(a, cache),
        Command::Verify(a) => {
            let suites = if a.suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                a.suites
            };
            let opts = VerifyOptions {
                cache_dir: cache.filter(|d| d.is_dir()).map(Path::to_path_buf),
                ..VerifyOptions::default()
            };
            report(verify(&suites, &opts))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures; exit status 2 is reserved for verify
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
