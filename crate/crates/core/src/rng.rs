//! Seeded PRNG streams.
//!
//! Every random decision in the crate draws from a [`ChaCha8Rng`]; the output
//! of ChaCha is fixed by its algorithm, so a master seed reproduces the same
//! run on every platform. Independent repeats use distinct ChaCha streams of
//! the same key.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// PRNG for a master seed, stream 0.
pub fn master(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// PRNG for the `stream`-th independent sub-run of `seed`.
pub fn derived(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
