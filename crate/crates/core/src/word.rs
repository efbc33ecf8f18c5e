//! Fixed-length binary words packed into a single machine word.
//!
//! A [`Word`] is a bit string of length `1..=64`. Bit index 0 is the most
//! significant position, so the textual form (`"1011"`), the lexicographic
//! order, and the packed integer order all coincide for words of equal
//! length. Exhaustive routines (ball enumeration, cube sweeps) are the
//! caller's responsibility to keep within budget; the type itself only
//! enforces `n <= 64`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::BitXor;
use core::str::FromStr;

use alloc::string::String;

use crate::{Error, Result};

/// A binary word of fixed length `n` with `1 <= n <= 64`.
///
/// All bit positions at or beyond `len` are zero. Ordering is by length,
/// then lexicographic (most significant bit first), so equal-length words
/// sort exactly in lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: u32,
    bits: u64,
}

/// All-ones mask for the low `len` bits.
#[inline]
pub(crate) fn low_mask(len: u32) -> u64 {
    debug_assert!((1..=64).contains(&len));
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Word {
    /// Builds a word from a packed payload. The most significant bit of the
    /// word is stored at machine-bit `len - 1`.
    ///
    /// Panics if `len` is outside `1..=64` or `bits` has stray high bits.
    pub fn new(len: u32, bits: u64) -> Self {
        assert!((1..=64).contains(&len), "word length must be in 1..=64");
        assert!(bits & !low_mask(len) == 0, "payload exceeds word length");
        Word { len, bits }
    }

    /// The all-zero word of length `len`.
    pub fn zero(len: u32) -> Self {
        assert!((1..=64).contains(&len), "word length must be in 1..=64");
        Word { len, bits: 0 }
    }

    /// The word of length `len` whose `w` lowest-index (most significant)
    /// positions are set, e.g. `prefix_ones(4, 1) == "1000"`.
    pub fn prefix_ones(len: u32, w: u32) -> Self {
        assert!(w <= len, "prefix weight exceeds length");
        let bits = if w == 0 {
            0
        } else if w == len {
            low_mask(len)
        } else {
            low_mask(len) & !(low_mask(len) >> w)
        };
        Word { len, bits }
    }

    /// Word length `n`; a word is never empty.
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u32 {
        self.len
    }

    /// The packed payload. Equal-length words compare lexicographically as
    /// these integers do.
    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Hamming weight: the number of set positions.
    #[inline]
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Hamming distance to `other`. Panics on length mismatch.
    #[inline]
    pub fn distance(&self, other: Word) -> u32 {
        assert_eq!(self.len, other.len, "word length mismatch");
        (self.bits ^ other.bits).count_ones()
    }

    /// Bit at `index`, where index 0 is the most significant position.
    #[inline]
    pub fn bit(&self, index: u32) -> bool {
        assert!(index < self.len, "bit index out of range");
        (self.bits >> (self.len - 1 - index)) & 1 == 1
    }

    /// Copy of `self` with the bit at `index` flipped.
    pub fn with_flipped(&self, index: u32) -> Word {
        assert!(index < self.len, "bit index out of range");
        Word {
            len: self.len,
            bits: self.bits ^ (1u64 << (self.len - 1 - index)),
        }
    }

    /// Positions of set bits in increasing index order (most significant
    /// first).
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(move |&i| self.bit(i))
    }

    /// Lexicographic comparison; bit index 0 is the most significant
    /// position. Panics on length mismatch.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        assert_eq!(self.len, other.len, "word length mismatch");
        self.bits.cmp(&other.bits)
    }

    /// Iterates over every word within Hamming distance `radius` of `self`,
    /// each exactly once, ordered by weight of the flip mask and then
    /// lexicographically by mask. Panics if `radius > len`.
    ///
    /// The ball around the zero word therefore yields words in
    /// (weight, lexicographic) order, which is the canonical error
    /// enumeration used throughout the crate.
    pub fn ball(&self, radius: u32) -> Ball {
        assert!(radius <= self.len, "ball radius exceeds word length");
        Ball {
            center: self.bits,
            len: self.len,
            radius,
            weight: 0,
            mask: 0,
            exhausted: false,
        }
    }
}

impl BitXor for Word {
    type Output = Word;

    fn bitxor(self, rhs: Word) -> Word {
        assert_eq!(self.len, rhs.len, "word length mismatch");
        Word {
            len: self.len,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let len = s.len();
        if len == 0 || len > 64 {
            return Err(Error::Parse(String::from(
                "word string must have 1..=64 characters",
            )));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(Error::Parse(String::from(
                        "word string may only contain 0 and 1",
                    )))
                }
            }
        }
        Ok(Word {
            len: len as u32,
            bits,
        })
    }
}

/// Iterator over a Hamming ball; see [`Word::ball`].
///
/// Flip masks of each weight class are enumerated in increasing numeric
/// order via the next-bit-permutation step, carried out in `u128` so the
/// final mask of a 64-bit class cannot overflow.
pub struct Ball {
    center: u64,
    len: u32,
    radius: u32,
    weight: u32,
    mask: u128,
    exhausted: bool,
}

impl Iterator for Ball {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.exhausted {
            return None;
        }
        let out = Word {
            len: self.len,
            bits: self.center ^ (self.mask as u64),
        };
        // Advance to the next mask: same weight class first, then the
        // smallest mask of the next weight.
        let next_in_class = if self.weight == 0 {
            1u128 << self.len // sentinel: out of range
        } else {
            let m = self.mask;
            let u = m & m.wrapping_neg();
            let s = m + u;
            s | (((m ^ s) >> 2) / u)
        };
        if next_in_class < (1u128 << self.len) {
            self.mask = next_in_class;
        } else if self.weight < self.radius {
            self.weight += 1;
            self.mask = (1u128 << self.weight) - 1;
        } else {
            self.exhausted = true;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ball_volume;
    use crate::rng::SplitMix64;
    use alloc::vec::Vec;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn weight_counts_set_bits() {
        assert_eq!(w("0000").weight(), 0);
        assert_eq!(w("1011001").weight(), 4);
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let x = crate::rng::uniform_word(&mut rng, 17);
            assert_eq!((x ^ x).weight(), 0);
        }
    }

    #[test]
    fn distance_is_xor_weight() {
        assert_eq!(w("0000").distance(w("1111")), 4);
        assert_eq!(w("1100").distance(w("1100")), 0);
        assert_eq!(w("1100").distance(w("0110")), 2);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn distance_rejects_length_mismatch() {
        let _ = w("101").distance(w("1010"));
    }

    #[test]
    fn lex_order_is_msb_first() {
        assert_eq!(w("000").lex_cmp(&w("001")), Ordering::Less);
        assert_eq!(w("101").lex_cmp(&w("101")), Ordering::Equal);
        assert_eq!(w("011").lex_cmp(&w("100")), Ordering::Less);
    }

    #[test]
    fn prefix_ones_sets_most_significant_bits() {
        assert_eq!(w("1000"), Word::prefix_ones(4, 1));
        assert_eq!(w("1110"), Word::prefix_ones(4, 3));
        assert_eq!(w("0000"), Word::prefix_ones(4, 0));
        assert_eq!(Word::prefix_ones(64, 64).weight(), 64);
    }

    #[test]
    fn display_parse_round_trip() {
        let mut rng = SplitMix64::new(3);
        for len in [1u32, 7, 31, 64] {
            for _ in 0..20 {
                let x = crate::rng::uniform_word(&mut rng, len);
                let s = alloc::format!("{x}");
                assert_eq!(s.len(), len as usize);
                assert_eq!(s.parse::<Word>().unwrap(), x);
            }
        }
    }

    #[test]
    fn ball_radius_zero_and_full_cube() {
        let c = w("000");
        let got: Vec<Word> = c.ball(0).collect();
        assert_eq!(got, alloc::vec![c]);
        let all: Vec<Word> = w("00").ball(2).collect();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn ball_radius_one_flips_each_position() {
        let got: Vec<Word> = w("0000").ball(1).collect();
        assert_eq!(got.len(), 5);
        assert_eq!(got[0], w("0000"));
        // Weight-1 masks in increasing numeric order.
        assert_eq!(got[1], w("0001"));
        assert_eq!(got[4], w("1000"));
        let expect: Vec<Word> = ["0000", "0001", "0010", "0100", "1000"]
            .iter()
            .map(|s| w(s))
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn ball_order_is_weight_then_lex_and_counts_match_volume() {
        for n in 1..=16u32 {
            let center = Word::zero(n);
            for r in 0..=n {
                let words: Vec<Word> = center.ball(r).collect();
                assert_eq!(words.len() as u128, ball_volume(n, r));
                // Unique, correct distance, and ordered by (weight, lex).
                for pair in words.windows(2) {
                    let (a, b) = (pair[0], pair[1]);
                    let key_a = (a.distance(center), a.bits());
                    let key_b = (b.distance(center), b.bits());
                    assert!(key_a < key_b, "ball order violated at n={n} r={r}");
                }
                for x in &words {
                    assert!(x.distance(center) <= r);
                }
            }
        }
    }

    #[test]
    fn ball_is_translation_invariant() {
        let mut rng = SplitMix64::new(11);
        let c = crate::rng::uniform_word(&mut rng, 9);
        let from_zero: Vec<u64> = Word::zero(9).ball(3).map(|m| m.bits()).collect();
        let from_c: Vec<u64> = c.ball(3).map(|m| (m ^ c).bits()).collect();
        assert_eq!(from_zero, from_c);
    }

    #[test]
    fn triangle_inequality_on_random_triples() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..500 {
            let a = crate::rng::uniform_word(&mut rng, 23);
            let b = crate::rng::uniform_word(&mut rng, 23);
            let c = crate::rng::uniform_word(&mut rng, 23);
            assert!(a.distance(c) <= a.distance(b) + b.distance(c));
        }
    }

    #[test]
    fn ball_handles_n_64() {
        let c = Word::zero(64);
        assert_eq!(c.ball(1).count(), 65);
    }
}
