//! Seeded pseudo-randomness.
//!
//! Every randomized routine in this crate runs on [`SplitMix64`], identified
//! in serialized outputs as [`PRNG_ID`]. Independent units of work (trials,
//! suffix completions, sampled candidates) each derive their own stream via
//! [`derive_seed`] from `(master seed, unit index)`, so results do not depend
//! on scheduling or worker count. Replicating experiment outputs across
//! implementations requires this exact generator and derivation rule.

use crate::word::{low_mask, Word};

/// Identifier recorded alongside every experiment output.
pub const PRNG_ID: &str = "splitmix64-v1";

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The 64-bit finalizer used by the generator and by seed derivation.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream assigned to work unit `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(
        master
            ^ mix64(
                index
                    .wrapping_mul(GOLDEN)
                    .wrapping_add(0x5851_F42D_4C95_7F2D),
            ),
    )
}

/// SplitMix64: a tiny splittable generator with a 64-bit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform double in `[0, 1)` from the top 53 bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `[0, n)` by fixed-point multiplication. The bias is
    /// below `n / 2^64` and the draw consumes exactly one output.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Uniform value in `[0, n)` for `n` up to `2^64` (inclusive), used to
    /// index Hamming-ball volumes.
    #[inline]
    pub fn below_u128(&mut self, n: u128) -> u128 {
        debug_assert!(n > 0 && n <= (1u128 << 64));
        (self.next_u64() as u128 * n) >> 64
    }
}

/// Uniform word of length `n`.
#[inline]
pub fn uniform_word(rng: &mut SplitMix64, n: u32) -> Word {
    Word::new(n, rng.next_u64() & low_mask(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn derive_seed_separates_units() {
        let s0 = derive_seed(7, 0);
        let s1 = derive_seed(7, 1);
        let t0 = derive_seed(8, 0);
        assert_ne!(s0, s1);
        assert_ne!(s0, t0);
    }

    #[test]
    fn next_f64_in_unit_interval() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SplitMix64::new(2);
        for _ in 0..1000 {
            assert!(rng.below(7) < 7);
        }
        // below_u128 covers the full-cube case n = 2^64.
        for _ in 0..100 {
            assert!(rng.below_u128(1u128 << 64) < (1u128 << 64));
        }
    }

    #[test]
    fn uniform_word_masks_to_length() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..100 {
            let w = uniform_word(&mut rng, 5);
            assert!(w.bits() < 32);
        }
    }
}
