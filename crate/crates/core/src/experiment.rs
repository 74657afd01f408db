//! Config-driven experiments: construct codes with several metrics, simulate them, overlay
//! union bounds and write plot-ready CSV/JSON plus a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{bler_bound_block, bler_bound_random, SnrPoint};
use crate::construction::{default_design_snr_db, rank, ConstructionParams, Metric, PdwVariant};
use crate::error::{Error, Result};
use crate::polar::CodeSpec;
use crate::sim::{
    run_bler, snr_grid, CheckNode, DecoderConfig, DecoderKind, InterleaverPolicy, MappingKind, MappingSpec,
    Payload, SimConfig, SimReport, StopRule,
};
use crate::spectrum::{obtain_tables, SpectrumLibrary, TableConfig};

/// Bundled configs, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2a", include_str!("../configs/fig2a.toml")),
    ("fig3", include_str!("../configs/fig3.toml")),
    ("long-n1024", include_str!("../configs/long_n1024.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// A construction metric as written in a config. `pdw` follows the curve's mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricChoice {
    Pdw,
    PdwBlock,
    PdwRandom,
    Ga,
    Mc,
}

/// `auto` uses block mapping for `L <= 2` and random mapping above.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingChoice {
    #[default]
    Auto,
    Block,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub length: usize,
    pub rate: f64,
    /// Defaults to 0 dB below rate 1/2 and 3 dB otherwise.
    pub design_snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoderSection {
    pub kind: String,
    pub list: usize,
    pub check_node: CheckNode,
}

impl Default for DecoderSection {
    fn default() -> Self {
        DecoderSection {
            kind: "sc".into(),
            list: 8,
            check_node: CheckNode::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrSection {
    pub start_db: f64,
    pub stop_db: f64,
    pub step_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StopSection {
    pub max_trials: u64,
    pub target_errors: u64,
}

impl Default for StopSection {
    fn default() -> Self {
        let s = StopRule::default();
        StopSection {
            max_trials: s.max_trials,
            target_errors: s.target_errors,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstructionSection {
    pub variant: PdwVariant,
    pub require_full_diversity: bool,
    /// Genie-aided trials for the `mc` metric.
    pub mc_trials: u64,
    /// Seed of the `mc` metric; defaults to the experiment seed plus one.
    pub mc_seed: Option<u64>,
}

impl Default for ConstructionSection {
    fn default() -> Self {
        ConstructionSection {
            variant: PdwVariant::Max,
            require_full_diversity: false,
            mc_trials: 100_000,
            mc_seed: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsSection {
    pub enabled: bool,
    pub d_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub metrics: Vec<MetricChoice>,
    pub blocks: Vec<usize>,
    #[serde(default)]
    pub mapping: MappingChoice,
    /// Reuse one interleaver for every codeword instead of drawing a fresh one.
    #[serde(default)]
    pub fixed_interleaver: bool,
    #[serde(default = "yes")]
    pub simulate: bool,
    /// Informational: the preset takes hours.
    #[serde(default)]
    pub long_running: bool,
    pub code: CodeSection,
    #[serde(default)]
    pub decoder: DecoderSection,
    pub snr: SnrSection,
    #[serde(default)]
    pub stop: StopSection,
    #[serde(default)]
    pub construction: ConstructionSection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

fn yes() -> bool {
    true
}

/// One curve of an experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvePlan {
    pub label: String,
    pub metric: Metric,
    pub blocks: usize,
    pub mapping: MappingKind,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, col)
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let t = l.trim_start();
        t.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
}

impl ExperimentConfig {
    /// Parse and validate. Diagnostics name `origin` and the offending line.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let location = match e.span() {
                Some(span) => {
                    let (line, col) = line_col(text, span.start);
                    format!("{}:{line}:{col}", origin.display())
                }
                None => origin.display().to_string(),
            };
            Error::Config {
                location,
                message: e.message().to_string(),
            }
        })?;
        cfg.validate().map_err(|(field, message)| {
            let location = match key_line(text, field.rsplit('.').next().unwrap_or(field)) {
                Some(line) => format!("{}:{}: field `{field}`", origin.display(), line + 1),
                None => format!("{}: field `{field}`", origin.display()),
            };
            Error::Config { location, message }
        })?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?, path)
    }

    /// Check the config; errors name the offending field.
    pub fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        let n = self.code.length;
        if n < 2 || !n.is_power_of_two() {
            return Err(("code.length", format!("N={n} must be a power of two >= 2")));
        }
        if !(self.code.rate > 0.0 && self.code.rate <= 1.0) {
            return Err(("code.rate", format!("rate {} must lie in (0, 1]", self.code.rate)));
        }
        if self.metrics.is_empty() {
            return Err(("metrics", "at least one metric is required".into()));
        }
        if self.blocks.is_empty() {
            return Err(("blocks", "at least one block count is required".into()));
        }
        for &l in &self.blocks {
            if l == 0 || !n.is_multiple_of(l) {
                return Err(("blocks", format!("L={l} does not divide N={n}")));
            }
            if self.mapping_for(l) == MappingKind::Block && l > 2 {
                return Err((
                    "mapping",
                    format!("block mapping is only supported for L <= 2 (got L={l}); use random"),
                ));
            }
        }
        if self.metrics.contains(&MetricChoice::PdwBlock) && self.blocks.iter().any(|&l| l > 2) {
            return Err(("metrics", "pdw-block needs L <= 2".into()));
        }
        if let Err(e) = snr_grid(self.snr.start_db, self.snr.stop_db, self.snr.step_db) {
            return Err(("snr", e.to_string()));
        }
        match self.decoder.kind.as_str() {
            "sc" => {}
            "scl" if self.decoder.list >= 1 => {}
            "scl" => return Err(("decoder.list", "list size must be at least 1".into())),
            other => return Err(("decoder.kind", format!("unknown decoder `{other}` (sc or scl)"))),
        }
        if self.stop.max_trials == 0 || self.stop.target_errors == 0 {
            return Err(("stop", "stop limits must be positive".into()));
        }
        if self.metrics.contains(&MetricChoice::Mc)
            && self.construction.mc_trials < crate::construction::MC_MIN_TRIALS
        {
            return Err(("construction.mc_trials", "needs at least 1000 trials".into()));
        }
        if !self.simulate && !self.bounds.enabled {
            return Err((
                "simulate",
                "nothing to do: simulation and bounds both disabled".into(),
            ));
        }
        Ok(())
    }

    pub fn mapping_for(&self, blocks: usize) -> MappingKind {
        match self.mapping {
            MappingChoice::Block => MappingKind::Block,
            MappingChoice::Random => MappingKind::Random,
            MappingChoice::Auto if blocks <= 2 => MappingKind::Block,
            MappingChoice::Auto => MappingKind::Random,
        }
    }

    pub fn k(&self) -> usize {
        (self.code.rate * self.code.length as f64).round() as usize
    }

    pub fn design_snr_db(&self) -> f64 {
        self.code
            .design_snr_db
            .unwrap_or_else(|| default_design_snr_db(self.code.rate))
    }

    pub fn mc_seed(&self) -> u64 {
        self.construction.mc_seed.unwrap_or(self.seed.wrapping_add(1))
    }

    /// One curve per (metric, L), metrics outermost.
    pub fn curves(&self) -> Vec<CurvePlan> {
        let mut out = Vec::new();
        for &choice in &self.metrics {
            for &l in &self.blocks {
                let mapping = self.mapping_for(l);
                let metric = match choice {
                    MetricChoice::Pdw if mapping == MappingKind::Block => Metric::PdwBlock,
                    MetricChoice::Pdw | MetricChoice::PdwRandom => Metric::PdwRandom,
                    MetricChoice::PdwBlock => Metric::PdwBlock,
                    MetricChoice::Ga => Metric::Ga,
                    MetricChoice::Mc => Metric::Mc,
                };
                out.push(CurvePlan {
                    label: format!("{}_L{l}", metric.name()),
                    metric,
                    blocks: l,
                    mapping,
                });
            }
        }
        out
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    /// Table ceilings the experiment needs.
    pub fn table_config(&self) -> TableConfig {
        let n = self.code.length.trailing_zeros();
        let needs_split = self.curves().iter().any(|c| {
            c.blocks == 2
                && c.mapping == MappingKind::Block
                && (c.metric == Metric::PdwBlock
                    || self.bounds.enabled
                    || self.construction.require_full_diversity)
        });
        TableConfig {
            split_max_exponent: if needs_split { n } else { 0 },
            spectrum_max_exponent: n,
            exploit_symmetry: true,
        }
    }

    fn decoder(&self) -> DecoderConfig {
        let kind = if self.decoder.kind == "scl" {
            DecoderKind::Scl {
                list: self.decoder.list,
            }
        } else {
            DecoderKind::Sc
        };
        DecoderConfig {
            kind,
            rule: self.decoder.check_node,
        }
    }
}

/// One row of a bound curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundPoint {
    pub snr_db: f64,
    pub raw_bound: f64,
    pub clipped_bound: f64,
    pub dmax: usize,
    pub skipped_terms: usize,
}

/// BLER union bound of `code` over an SNR grid. One block uses the classical single-block
/// bound; two blocks under block mapping use the exact split spectrum; random mapping uses
/// weight patterns.
pub fn bound_curve(
    lib: &SpectrumLibrary,
    code: &CodeSpec,
    mapping: MappingKind,
    blocks: usize,
    snr_db: &[f64],
    d_max: Option<usize>,
) -> Result<Vec<BoundPoint>> {
    let n = code.length();
    if blocks == 0 || !n.is_multiple_of(blocks) {
        return Err(Error::invalid(format!("L={blocks} does not divide N={n}")));
    }
    snr_db
        .iter()
        .map(|&db| {
            let snr = SnrPoint::from_db(db)?;
            let b = match (mapping, blocks) {
                (MappingKind::Block, 2) => bler_bound_block(lib.split(n)?, code, snr, d_max)?,
                (MappingKind::Block, l) if l > 2 => {
                    return Err(Error::invalid("block-mapping bounds need L <= 2"))
                }
                _ => bler_bound_random(lib.spectrum(n)?, code, blocks, n / blocks, snr, d_max)?,
            };
            Ok(BoundPoint {
                snr_db: db,
                raw_bound: b.raw(),
                clipped_bound: b.clipped(),
                dmax: b.d_max,
                skipped_terms: b.skipped_terms,
            })
        })
        .collect()
}

/// CSV text with an optional `# config_sha256=` first line.
pub fn to_csv<T: Serialize>(rows: &[T], config_hash: Option<&str>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::invalid(format!("csv: {e}")))?;
    }
    let body = w.into_inner().map_err(|e| Error::invalid(format!("csv: {e}")))?;
    let mut out = String::new();
    if let Some(h) = config_hash {
        out.push_str(&format!("# config_sha256={h}\n"));
    }
    out.push_str(&String::from_utf8(body).expect("csv is utf-8"));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveResult {
    pub plan: CurvePlan,
    pub info_set: Vec<usize>,
    pub report: Option<SimReport>,
    pub bounds: Option<Vec<BoundPoint>>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentOutput {
    pub config_hash: String,
    pub curves: Vec<CurveResult>,
    pub manifest: PathBuf,
}

#[derive(Serialize)]
struct ManifestFile {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    name: &'a str,
    config_hash: &'a str,
    crate_version: &'a str,
    seed: u64,
    mc_seed: u64,
    config: &'a ExperimentConfig,
    curves: Vec<&'a CurvePlan>,
    files: Vec<ManifestFile>,
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, text)?;
    files.push(path);
    Ok(())
}

/// Load or build the tables `cfg` needs, using `cache_dir` when given.
pub fn tables_for(cfg: &ExperimentConfig, cache_dir: Option<&Path>) -> Result<SpectrumLibrary> {
    obtain_tables(&cfg.table_config(), cache_dir)
}

/// Run every curve and write outputs into `out_dir`. `progress` receives one line per stage.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    lib: &SpectrumLibrary,
    out_dir: &Path,
    progress: &mut dyn FnMut(&str),
) -> Result<ExperimentOutput> {
    cfg.validate().map_err(|(field, message)| Error::Config {
        location: format!("field `{field}`"),
        message,
    })?;
    fs::create_dir_all(out_dir)?;
    let hash = cfg.hash();
    let n = cfg.code.length;
    let k = cfg.k();
    let grid = snr_grid(cfg.snr.start_db, cfg.snr.stop_db, cfg.snr.step_db)?;
    let mut curves = Vec::new();

    for plan in cfg.curves() {
        progress(&format!("{}: constructing", plan.label));
        let params = ConstructionParams {
            length: n,
            blocks: plan.blocks,
            design_snr_db: cfg.design_snr_db(),
            variant: cfg.construction.variant,
            require_full_diversity: cfg.construction.require_full_diversity,
            mc_mapping: plan.mapping,
            trials: cfg.construction.mc_trials,
            seed: cfg.mc_seed(),
        };
        let ranking = rank(plan.metric, &params, Some(lib))?;
        let code = ranking.code(k)?;
        let mut files = Vec::new();
        let mut ranking_json = ranking.to_json(k)?;
        ranking_json["config_hash"] = hash.clone().into();
        write(
            out_dir,
            &format!("{}.ranking.json", plan.label),
            &(serde_json::to_string_pretty(&ranking_json)? + "\n"),
            &mut files,
        )?;

        let bounds = if cfg.bounds.enabled {
            progress(&format!("{}: bounds", plan.label));
            let pts = bound_curve(lib, &code, plan.mapping, plan.blocks, &grid, cfg.bounds.d_max)?;
            write(
                out_dir,
                &format!("{}.bound.csv", plan.label),
                &to_csv(&pts, Some(&hash))?,
                &mut files,
            )?;
            Some(pts)
        } else {
            None
        };

        let report = if cfg.simulate {
            progress(&format!("{}: simulating", plan.label));
            let policy = if cfg.fixed_interleaver {
                InterleaverPolicy::Fixed(cfg.seed)
            } else {
                InterleaverPolicy::Fresh
            };
            let map = MappingSpec::new(plan.mapping, n, plan.blocks, policy)?;
            let mut sim = SimConfig::new(code.clone(), map, grid.clone(), cfg.seed);
            sim.decoder = cfg.decoder();
            sim.stop = StopRule {
                max_trials: cfg.stop.max_trials,
                target_errors: cfg.stop.target_errors,
            };
            sim.payload = Payload::RandomData;
            let report = run_bler(&sim)?;
            write(
                out_dir,
                &format!("{}.csv", plan.label),
                &to_csv(&report.points, Some(&hash))?,
                &mut files,
            )?;
            Some(report)
        } else {
            None
        };

        curves.push(CurveResult {
            plan,
            info_set: code.info_set().to_vec(),
            report,
            bounds,
            files,
        });
    }

    let mut listed = Vec::new();
    for c in &curves {
        for f in &c.files {
            let bytes = fs::read(f)?;
            listed.push(ManifestFile {
                path: f
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
    }
    let manifest = Manifest {
        name: &cfg.name,
        config_hash: &hash,
        crate_version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        mc_seed: cfg.mc_seed(),
        config: cfg,
        curves: curves.iter().map(|c| &c.plan).collect(),
        files: listed,
    };
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    Ok(ExperimentOutput {
        config_hash: hash,
        curves,
        manifest: manifest_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
name = "small"
seed = 3
metrics = ["pdw", "ga"]
blocks = [1, 2]

[code]
length = 16
rate = 0.5

[snr]
start_db = 0.0
stop_db = 4.0
step_db = 2.0

[stop]
max_trials = 600
target_errors = 20

[bounds]
enabled = true
"#;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml_str(text, Path::new("test.toml"))
    }

    #[test]
    fn plans_and_defaults() {
        let cfg = parse(SMALL).unwrap();
        let labels: Vec<String> = cfg.curves().into_iter().map(|c| c.label).collect();
        assert_eq!(labels, ["pdw-block_L1", "pdw-block_L2", "ga_L1", "ga_L2"]);
        assert_eq!(cfg.k(), 8);
        assert_eq!(cfg.design_snr_db(), 3.0);
        assert_eq!(cfg.mapping_for(4), MappingKind::Random);
        assert_eq!(cfg.table_config().split_max_exponent, 4);
    }

    #[test]
    fn bundled_presets() {
        for (name, text) in PRESETS {
            let cfg = ExperimentConfig::from_toml_str(text, Path::new(name)).unwrap();
            assert_eq!(&cfg.name, name);
        }
        let fig2a = parse(preset("fig2a").unwrap()).unwrap();
        assert_eq!(fig2a.curves().len(), 6);
        assert_eq!(fig2a.k(), 64);
        let fig3 = parse(preset("fig3").unwrap()).unwrap();
        let plans = fig3.curves();
        assert_eq!(plans.len(), 3);
        assert!(fig3.bounds.enabled);
        assert_eq!(plans[2].mapping, MappingKind::Random);
        assert_eq!(plans[2].metric, Metric::PdwRandom);
        let long = parse(preset("long-n1024").unwrap()).unwrap();
        assert!(long.long_running);
        assert_eq!(long.table_config().split_max_exponent, 0);
        assert!(preset("nope").is_none());
    }

    #[test]
    fn validation_diagnostics() {
        let err = parse(&SMALL.replace(r#"metrics = ["pdw", "ga"]"#, "metrics = []")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("test.toml:4") && msg.contains("metrics"), "{msg}");
        let err = parse(&SMALL.replace("rate = 0.5", "rate = 0.5\nbogus = 1")).unwrap_err();
        assert!(err.to_string().contains("test.toml:10"), "{err}");
        assert!(parse(&SMALL.replace("blocks = [1, 2]", "blocks = [3]")).is_err());
        assert!(parse(&SMALL.replace("blocks = [1, 2]", "blocks = [4]\nmapping = \"block\"")).is_err());
        assert!(parse(&SMALL.replace("[bounds]\nenabled = true", "")).is_ok());
    }

    #[test]
    fn run_is_idempotent_and_hashed() {
        let cfg = parse(SMALL).unwrap();
        let lib = tables_for(&cfg, None).unwrap();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let out_a = run_experiment(&cfg, &lib, a.path(), &mut |_| {}).unwrap();
        run_experiment(&cfg, &lib, b.path(), &mut |_| {}).unwrap();
        assert_eq!(out_a.curves.len(), 4);
        for c in &out_a.curves {
            for f in &c.files {
                let text = fs::read_to_string(f).unwrap();
                assert!(text.contains(&out_a.config_hash), "{}", f.display());
                let twin = b.path().join(f.file_name().unwrap());
                assert_eq!(text, fs::read_to_string(twin).unwrap());
            }
        }
        let m1 = fs::read_to_string(&out_a.manifest).unwrap();
        assert_eq!(m1, fs::read_to_string(b.path().join("manifest.json")).unwrap());
        let sim_csv = fs::read_to_string(a.path().join("ga_L2.csv")).unwrap();
        assert!(sim_csv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("snr_db,trials,block_errors,bler,bler_lo,bler_hi,bit_errors,ber"));
        let bound_csv = fs::read_to_string(a.path().join("ga_L2.bound.csv")).unwrap();
        assert!(bound_csv
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("snr_db,raw_bound,clipped_bound,dmax,skipped_terms"));
    }
}
