//! Counter-based random streams.
//!
//! A stream is identified by `(seed, stream)`; block `i` of a stream starts at
//! a fixed word offset, so any block can be generated independently of the
//! others and of the order in which blocks are scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Each block may draw up to 2^36 32-bit words.
const BLOCK_WORDS_LOG2: u32 = 36;

pub(crate) fn block_rng(seed: u64, stream: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(block) << BLOCK_WORDS_LOG2);
    rng
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
#[inline]
pub(crate) fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform integer in `[0, bound)` by rejection; `bound > 0`.
pub(crate) fn below<R: RngCore>(rng: &mut R, bound: u64) -> u64 {
    let zone = u64::MAX - (u64::MAX % bound) - 1;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// FNV-1a, used to derive a stream id from a scope label.
pub(crate) fn stream_id(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
