//! Counter-based random streams. Every trial owns a ChaCha stream addressed by
//! `(seed, snr index, trial index)`, so results never depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TRIAL_BITS: u32 = 44;
/// Stream reserved for seeded fixed interleavers.
const INTERLEAVER_STREAM: u64 = u64::MAX;

/// Generator for trial `trial` at SNR grid point `snr_index`.
pub fn trial_rng(seed: u64, snr_index: usize, trial: u64) -> ChaCha8Rng {
    debug_assert!(trial < 1 << TRIAL_BITS);
    debug_assert!((snr_index as u64) < 1 << (64 - TRIAL_BITS - 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((snr_index as u64) << TRIAL_BITS) | trial);
    rng
}

/// Generator used to draw a fixed interleaver from `seed`.
pub fn interleaver_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INTERLEAVER_STREAM);
    rng
}
