//! Compare the engine against exhaustive codeword enumeration.
use polarfade::spectrum::SpectrumLibrary;
use polarfade::verify::oracle_mismatches;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(5)?;
    for n in [2usize, 4, 8, 16] {
        let bad = oracle_mismatches(lib.split(n)?, 1..=n)?;
        println!("N={n:>2}: {} mismatches", bad.len());
    }
    // the top rows of N=32 are still small enough to enumerate
    let bad = oracle_mismatches(lib.split(32)?, 20..=32)?;
    println!("N=32, rows 20..32: {} mismatches", bad.len());
    Ok(())
}
