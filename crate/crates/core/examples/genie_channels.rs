//! Per-channel error rates of genie-aided SC against the union bound.
use polarfade::bounds::channel_error_bound_block;
use polarfade::sim::{genie_channel_errors, CheckNode, MappingSpec};
use polarfade::spectrum::SpectrumLibrary;
use polarfade::SnrPoint;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(4)?;
    let snr = SnrPoint::from_db(10.0)?;
    let est = genie_channel_errors(&MappingSpec::block(16, 2)?, snr, 50_000, 3, CheckNode::Exact)?;
    for i in [8usize, 12, 14, 15, 16] {
        let bound = channel_error_bound_block(lib.split(16)?, i, snr, None)?;
        println!(
            "i={i:>2}  MC {:.3e} ± {:.1e}  bound {:.3e}",
            est.rate(i),
            est.sigma(i),
            bound.clipped()
        );
    }
    Ok(())
}
