//! Seeded randomness for a simulation run.
//!
//! One [`RunRng`] exists per run and is shared by the failure process and the
//! allocation policies, so a run is fully determined by `(seed, pfr,
//! workload)`. The generator is ChaCha with 8 rounds (`rand_chacha`'s
//! `ChaCha8Rng`), seeded via `SeedableRng::seed_from_u64`, which is stable
//! across platforms and releases.
//!
//! Draw order is part of the on-disk contract (traces recorded on one machine
//! must replay bit-identically on another):
//!
//! 1. one uniform pick per block allocation or swap-replacement choice, in
//!    program order;
//! 2. one raw `u64` per workload append for the power-failure Bernoulli test.
//!
//! The failure test consumes its `u64` even when outcomes are replayed from a
//! trace, keeping the stream aligned with the recording run.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-run random stream.
#[derive(Clone, Debug)]
pub struct RunRng {
    rng: ChaCha8Rng,
}

impl RunRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Bernoulli power-failure draw: true with probability `pfr`.
    ///
    /// Implemented as `next_u64() < round(pfr * 2^64)` in 128-bit space so
    /// that `pfr = 0.0` never fires and `pfr = 1.0` always fires, with exactly
    /// one `u64` consumed per call.
    pub fn draw_failure(&mut self, pfr: f64) -> bool {
        let threshold = (pfr * 18_446_744_073_709_551_616.0) as u128;
        u128::from(self.rng.next_u64()) < threshold
    }

    /// Uniform pick from `0..n`. `n` must be nonzero.
    pub fn pick(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        self.rng.gen_range(0..n)
    }
}

/// SplitMix64 finalizer (Steele, Lea & Flood; public reference constants).
///
/// Used by the sweep harness to derive per-cell seeds from a base seed so
/// that adding cells or replicates never perturbs existing ones.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
