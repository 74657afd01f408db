//! A small config-driven experiment written to a temporary directory.
use std::path::Path;

use polarfade::experiment::{run_experiment, tables_for, ExperimentConfig};

const CONFIG: &str = r#"
name = "demo"
seed = 5
metrics = ["pdw", "ga"]
blocks = [1, 2]

[code]
length = 32
rate = 0.5

[snr]
start_db = 0.0
stop_db = 12.0
step_db = 4.0

[stop]
max_trials = 5000
target_errors = 50

[bounds]
enabled = true
"#;

fn main() -> polarfade::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG, Path::new("demo.toml"))?;
    let lib = tables_for(&cfg, None)?;
    let dir = std::env::temp_dir().join("polarfade-demo");
    let out = run_experiment(&cfg, &lib, &dir, &mut |line| println!("{line}"))?;
    println!("config hash {}", out.config_hash);
    for c in &out.curves {
        if let Some(r) = &c.report {
            let last = r.points.last().expect("grid is non-empty");
            println!(
                "{:<14} BLER at {} dB: {:.3e}",
                c.plan.label, last.snr_db, last.bler
            );
        }
    }
    println!("manifest: {}", out.manifest.display());
    Ok(())
}
