//! Low-SNR bounds: terms whose validity condition fails are skipped and counted.
use polarfade::bounds::{low_snr_bound_block, low_snr_bound_random};
use polarfade::spectrum::SpectrumLibrary;
use polarfade::{Error, SnrPoint};

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(4)?;
    let snr = SnrPoint::new(0.1)?;
    for i in [9usize, 12, 16] {
        let block = low_snr_bound_block(lib.split(16)?, i, snr, None)?;
        print!(
            "i={i:>2}: block {:.4} ({} skipped)",
            block.raw(),
            block.skipped_terms
        );
        match low_snr_bound_random(lib.spectrum(16)?, i, 2, 8, snr, None) {
            Ok(b) => println!(", random {:.4} ({} skipped)", b.raw(), b.skipped_terms),
            Err(Error::BoundInapplicable { skipped }) => {
                println!(", random inapplicable ({skipped} skipped)")
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
