//! Rank channels by PDW, select an information set and inspect its diversity.
use polarfade::construction::{diversity_report_block, rank, ConstructionParams, Metric};
use polarfade::spectrum::SpectrumLibrary;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(6)?;
    let params = ConstructionParams::new(64, 2, 3.0);
    let ranking = rank(Metric::PdwBlock, &params, Some(&lib))?;
    let info = ranking.info_set(32)?;
    println!("PDW block, N=64 K=32: {info:?}");

    let report = diversity_report_block(lib.split(64)?, &info)?;
    println!("channels without full diversity: {:?}", report.flagged());

    let mut strict = params.clone();
    strict.require_full_diversity = true;
    let filtered = rank(Metric::PdwBlock, &strict, Some(&lib))?;
    println!("with the full-diversity filter: {:?}", filtered.info_set(32)?);

    let random = rank(Metric::PdwRandom, &params, Some(&lib))?;
    let shared = random.info_set(32)?.iter().filter(|i| info.contains(i)).count();
    println!("PDW random shares {shared}/32 channels with PDW block");
    Ok(())
}
