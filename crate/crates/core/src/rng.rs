//! Counter-based random streams.
//!
//! Every random quantity in the crate is a hash of `(seed, stream, counter)`
//! mixed through SplitMix64. There is no generator state to share, so a value
//! depends only on its coordinates: the same master seed and realization index
//! produce the same disorder on any number of workers, and a disorder field
//! over the infinite line can be read at any site without generating the
//! sites before it.
//!
//! Sign fields on the line are bit-packed: site `x` reads bit `x mod 64` of
//! the word for block `x div 64` (Euclidean division, so negative sites work).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tags; distinct tags give independent streams under the same seed.
pub mod stream {
    pub const LINE_SITES: u64 = 0x4c49_4e45;
    pub const PLANE_SITES: u64 = 0x504c_414e;
    pub const BONDS: u64 = 0x424f_4e44;
    pub const REALIZATION: u64 = 0x5245_414c;
    pub const CHAIN: u64 = 0x4348_4149;
}

#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash of a `(seed, stream, counter)` triple.
#[inline]
pub fn mix(seed: u64, stream: u64, counter: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter)
}

/// Seed of realization `index` under `master`.
///
/// This is the documented per-realization derivation used by every
/// experiment: `mix(master, REALIZATION, index)`.
#[inline]
pub fn realization_seed(master: u64, index: u64) -> u64 {
    mix(master, stream::REALIZATION, index)
}

/// 64 packed signs for line block `block` (sites `64·block .. 64·block+63`).
/// A set bit means −1.
#[inline]
pub fn line_word(seed: u64, block: i64) -> u64 {
    mix(seed, stream::LINE_SITES, block as u64)
}

/// Sign of the line field at site `x`: `true` for −1.
#[inline]
pub fn line_bit(seed: u64, x: i64) -> bool {
    let block = x.div_euclid(64);
    let bit = x.rem_euclid(64);
    (line_word(seed, block) >> bit) & 1 == 1
}

/// Sign of the plane field at `(x, y)` with `y != 0`: `true` for −1.
/// Sites on the row `y = 0` are read from the line field.
#[inline]
pub fn plane_bit(seed: u64, x: i64, y: i64) -> bool {
    let key = (x as u64).rotate_left(32) ^ (y as u64);
    mix(seed, stream::PLANE_SITES, key) & 1 == 1
}

/// Independent chacha stream for a Markov chain.
pub fn chain_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, stream::CHAIN, 0))
}

/// Uniform `[0, 1)` from the top 53 bits of a hash.
#[inline]
pub fn unit_f64(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
