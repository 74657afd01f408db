//! Weight patterns of an interleaved codeword and their probabilities.
use polarfade::bounds::{enumerate_patterns, pattern_probability, pattern_probability_exact};

fn main() {
    let (blocks, block_size, d) = (4, 8, 5);
    let mut total = 0.0;
    for p in enumerate_patterns(blocks, block_size, d) {
        let prob = pattern_probability(&p);
        total += prob;
        println!(
            "f = {:?}  P = {:.6}  exact {}",
            p.counts(),
            prob,
            pattern_probability_exact(&p)
        );
    }
    println!("sum = {total}");
}
