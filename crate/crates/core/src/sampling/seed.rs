//! Reproducible stream splitting.
//!
//! Every random stream is a `ChaCha8Rng` seeded with `mix(base_seed, tag)`,
//! where `mix` is the SplitMix64 output function applied to
//! `base + (tag + 1) * 0x9E3779B97F4A7C15`:
//!
//! ```text
//! z = base + (tag + 1) * 0x9E3779B97F4A7C15      (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z =  z ^ (z >> 31)
//! ```
//!
//! Stream tags for one family are [`PARENT`], [`LATENT`], `CHILD_BASE + k`
//! and `PERM_BASE + k` for graph index `k`. Harness cells derive their family
//! seed as `mix(mix(base, m), run)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PARENT: u64 = 0x01;
pub const LATENT: u64 = 0x02;
pub const CHILD_BASE: u64 = 0x100;
pub const PERM_BASE: u64 = 0x200;
/// Streams used by Monte Carlo helpers outside family generation.
pub const AUX_BASE: u64 = 0x1000;

pub fn mix(base: u64, tag: u64) -> u64 {
    let mut z = base.wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream(base: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(base, tag))
}

pub fn child_stream(base: u64, k: usize) -> ChaCha8Rng {
    stream(base, CHILD_BASE + k as u64)
}

pub fn perm_stream(base: u64, k: usize) -> ChaCha8Rng {
    stream(base, PERM_BASE + k as u64)
}

/// Seed of harness cell `(m, run)`.
pub fn cell_seed(base: u64, m: usize, run: usize) -> u64 {
    mix(mix(base, m as u64), run as u64)
}
