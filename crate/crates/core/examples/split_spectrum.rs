//! Build exact split spectra up to N=16 and print the minimum-weight rows.
use polarfade::spectrum::SpectrumLibrary;

fn main() -> polarfade::Result<()> {
    let lib = SpectrumLibrary::build(4)?;
    let split = lib.split(16)?;
    println!("N=16  i  d_min  minimum-weight split counts");
    for i in 1..=16 {
        let d_min = split.d_min(i)?;
        let cells: Vec<String> = split
            .polar_row(i)?
            .iter_nonzero()
            .filter(|&(j, k, _)| j + k == d_min)
            .map(|(j, k, a)| format!("({j},{k})={a}"))
            .collect();
        println!("     {i:>2}  {d_min:>5}  {}", cells.join(" "));
    }
    println!("A(4,3) of row 1 = {}", split.polar(1, 4, 3)?);
    Ok(())
}
