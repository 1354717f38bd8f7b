//! Seeded random streams for the experiments.
//!
//! Algorithm, fixed so that outputs replay bit-for-bit on every platform:
//!
//! * A `u64` seed is expanded to the 32-byte ChaCha20 key by four successive
//!   SplitMix64 outputs, stored little-endian.
//! * A uniform double in `[0, 1)` is `(next_u64 >> 11) · 2^-53`.
//! * Sub-seeds for trial `i` of a run seeded with `s` are
//!   `split_seed(s, i) = splitmix64(s ^ splitmix64(i + 0x9E3779B97F4A7C15))`.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for the state `x` (state advanced by the caller).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn split_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(GOLDEN_GAMMA)))
}

pub struct Stream {
    inner: ChaCha20Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(state);
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        Stream {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in the half-open interval `(lo, hi]`.
    pub fn uniform_open_closed(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (1.0 - self.uniform())
    }

    /// `10^(-decades·u)`: log-uniform in `(10^-decades, 1]`.
    pub fn log_uniform_unit(&mut self, decades: f64) -> f64 {
        10f64.powf(-decades * self.uniform())
    }
}
