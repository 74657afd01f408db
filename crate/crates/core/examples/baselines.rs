//! Gaussian-approximation and genie-aided Monte-Carlo rankings next to PDW.
use polarfade::construction::{rank, ConstructionParams, Metric};
use polarfade::spectrum::SpectrumLibrary;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(6)?;
    let mut params = ConstructionParams::new(64, 2, 3.0);
    params.trials = 20_000;
    params.seed = 7;
    let pdw = rank(Metric::PdwBlock, &params, Some(&lib))?.info_set(32)?;
    for metric in [Metric::Ga, Metric::Mc] {
        let set = rank(metric, &params, None)?.info_set(32)?;
        let shared = set.iter().filter(|i| pdw.contains(i)).count();
        println!("{metric:>4}: {shared}/32 channels shared with PDW");
    }
    Ok(())
}
