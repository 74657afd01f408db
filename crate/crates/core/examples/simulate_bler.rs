//! Monte-Carlo BLER of a PDW code under SC and SCL over two fading blocks.
use polarfade::construction::{rank, ConstructionParams, Metric};
use polarfade::sim::{run_bler, DecoderConfig, MappingSpec, SimConfig, StopRule};
use polarfade::spectrum::SpectrumLibrary;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(6)?;
    let code = rank(Metric::PdwBlock, &ConstructionParams::new(64, 2, 3.0), Some(&lib))?.code(32)?;
    for decoder in [DecoderConfig::sc(), DecoderConfig::scl(8)] {
        let mut cfg = SimConfig::new(
            code.clone(),
            MappingSpec::block(64, 2)?,
            vec![0.0, 5.0, 10.0, 15.0],
            1,
        );
        cfg.decoder = decoder;
        cfg.stop = StopRule {
            max_trials: 20_000,
            target_errors: 100,
        };
        let report = run_bler(&cfg)?;
        for p in &report.points {
            println!(
                "{:>5} {:>5.1} dB  BLER {:.3e}  [{:.3e}, {:.3e}]  {} trials",
                report.decoder, p.snr_db, p.bler, p.bler_lo, p.bler_hi, p.trials
            );
        }
    }
    Ok(())
}
