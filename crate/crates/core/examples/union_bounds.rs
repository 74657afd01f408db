//! Channel and block error union bounds under block and random mapping.
use polarfade::bounds::{
    bler_bound_block, bler_bound_random, channel_error_bound_block, channel_error_bound_random,
};
use polarfade::construction::{rank, ConstructionParams, Metric};
use polarfade::spectrum::SpectrumLibrary;
use polarfade::SnrPoint;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(5)?;
    let split = lib.split(32)?;
    let table = lib.spectrum(32)?;
    for db in [10.0, 20.0, 30.0] {
        let snr = SnrPoint::from_db(db)?;
        let block = channel_error_bound_block(split, 32, snr, None)?;
        let random = channel_error_bound_random(table, 32, 2, 16, snr, None)?;
        println!(
            "i=32 at {db} dB: block {:.3e}, random {:.3e}",
            block.raw(),
            random.raw()
        );
    }

    let code = rank(Metric::PdwBlock, &ConstructionParams::new(32, 2, 0.0), Some(&lib))?.code(8)?;
    for db in [20.0, 30.0, 40.0] {
        let snr = SnrPoint::from_db(db)?;
        let b = bler_bound_block(split, &code, snr, None)?;
        let r = bler_bound_random(table, &code, 4, 8, snr, Some(12))?;
        println!(
            "(32,8) at {db} dB: block L=2 {:.3e} [{}], random L=4 {:.3e} [{}]",
            b.clipped(),
            b.kind_label(),
            r.clipped(),
            r.kind_label()
        );
    }
    Ok(())
}
