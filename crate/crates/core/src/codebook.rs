//! Codebooks: ordered lists of codewords with provenance, plus structural
//! analyses (minimum distance, list decodability).
//!
//! Codebooks are ordered and may contain duplicate words; set semantics
//! would silently change `N`. A codebook sampled with a given seed always
//! reproduces the same word list.

use alloc::vec::Vec;

use crate::rng::{uniform_word, SplitMix64};
use crate::word::Word;
use crate::{Error, Result};

/// Provenance of a codebook's word list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// Words drawn iid uniform from the seeded generator.
    Random { seed: u64 },
    /// All XOR combinations of a generator row list.
    Linear,
    /// Explicitly supplied word list.
    Explicit,
}

/// An ordered `[n, N]` binary codebook.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: u32,
    words: Vec<Word>,
    origin: Origin,
}

impl Codebook {
    /// Wraps an explicit word list. Panics if the list is empty or lengths
    /// are inconsistent.
    pub fn explicit(n: u32, words: Vec<Word>) -> Self {
        Self::with_origin(n, words, Origin::Explicit)
    }

    /// Reassembles a codebook with stated provenance, e.g. when reading a
    /// serialized code file. The provenance is trusted, not re-derived.
    pub fn from_parts(n: u32, words: Vec<Word>, origin: Origin) -> Self {
        Self::with_origin(n, words, origin)
    }

    pub(crate) fn with_origin(n: u32, words: Vec<Word>, origin: Origin) -> Self {
        assert!((1..=64).contains(&n), "block length must be in 1..=64");
        assert!(!words.is_empty(), "codebook needs at least one word");
        assert!(
            words.iter().all(|w| w.len() == n),
            "codeword length mismatch"
        );
        Codebook { n, words, origin }
    }

    /// Samples `num_words` iid uniform codewords of length `n`. The same
    /// `(n, num_words, seed)` always yields the same codebook.
    pub fn sample_random(n: u32, num_words: usize, seed: u64) -> Self {
        assert!(num_words >= 1, "codebook needs at least one word");
        let mut rng = SplitMix64::new(seed);
        let words = (0..num_words).map(|_| uniform_word(&mut rng, n)).collect();
        Self::with_origin(n, words, Origin::Random { seed })
    }

    /// Spans the linear code of all `2^k` XOR combinations of `rows`,
    /// enumerated in subset order (row `j` participates in combination `s`
    /// iff bit `j` of `s` is set). The zero word is always index 0. An empty
    /// row list yields the trivial code `{0^n}`.
    pub fn from_generator_matrix(n: u32, rows: &[Word]) -> Self {
        assert!(rows.len() as u32 <= n, "more generator rows than length");
        assert!(
            rows.iter().all(|r| r.len() == n),
            "generator row length mismatch"
        );
        let k = rows.len();
        let mut words = Vec::with_capacity(1 << k);
        for s in 0u64..(1u64 << k) {
            let mut acc = Word::zero(n);
            for (j, &row) in rows.iter().enumerate() {
                if (s >> j) & 1 == 1 {
                    acc = acc ^ row;
                }
            }
            words.push(acc);
        }
        Self::with_origin(n, words, Origin::Linear)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of codewords `N`.
    #[inline]
    pub fn num_words(&self) -> usize {
        self.words.len()
    }

    #[inline]
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    #[inline]
    pub fn word(&self, i: usize) -> Word {
        self.words[i]
    }

    #[inline]
    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Rate `log2(N) / n`.
    pub fn rate(&self) -> f64 {
        libm::log2(self.words.len() as f64) / self.n as f64
    }

    /// Copy with the `i`-th codeword replaced by `x`.
    pub fn replaced(&self, i: usize, x: Word) -> Codebook {
        assert!(i < self.words.len(), "codeword index out of range");
        assert_eq!(x.len(), self.n, "word length mismatch");
        let mut words = self.words.clone();
        words[i] = x;
        Codebook {
            n: self.n,
            words,
            origin: Origin::Explicit,
        }
    }

    /// Minimum pairwise Hamming distance over distinct index pairs; zero if
    /// any word is duplicated. Errors with [`Error::TooFewWords`] when
    /// `N < 2`.
    pub fn min_distance(&self) -> Result<u32> {
        if self.words.len() < 2 {
            return Err(Error::TooFewWords);
        }
        let mut best = self.n + 1;
        for i in 0..self.words.len() {
            for j in (i + 1)..self.words.len() {
                let d = self.words[i].distance(self.words[j]);
                if d < best {
                    best = d;
                    if best == 0 {
                        return Ok(0);
                    }
                }
            }
        }
        Ok(best)
    }

    /// A nonzero codeword of minimum weight, ties broken lexicographically.
    /// Requires linear provenance ([`Error::NotLinear`]) and at least one
    /// nonzero word ([`Error::AllZeroCode`]).
    pub fn min_weight_nonzero(&self) -> Result<Word> {
        if self.origin != Origin::Linear {
            return Err(Error::NotLinear);
        }
        let mut best: Option<Word> = None;
        for &w in &self.words {
            if w.weight() == 0 {
                continue;
            }
            best = Some(match best {
                None => w,
                Some(b) => {
                    if (w.weight(), w.bits()) < (b.weight(), b.bits()) {
                        w
                    } else {
                        b
                    }
                }
            });
        }
        best.ok_or(Error::AllZeroCode)
    }

    /// Checks `[ell, radius]` list decodability: does every center `y` of
    /// the cube satisfy `|C ∩ B(radius, y)| <= ell`?
    ///
    /// Exhaustive mode spreads each codeword over its ball into a per-center
    /// count table and then scans every center in lexicographic order, so
    /// the witness (when one exists) is the lexicographically least
    /// violating center. Sampled mode scans heuristic hot spots (every
    /// codeword and every codeword with at most one bit flipped) plus
    /// seeded uniform centers; a report with `holds = true` from sampled
    /// mode only means no violation was found.
    pub fn check_list_decodable(
        &self,
        ell: usize,
        radius: u32,
        mode: ListDecodeMode,
    ) -> Result<ListDecodabilityReport> {
        assert!(radius <= self.n, "radius exceeds block length");
        match mode {
            ListDecodeMode::Exhaustive { max_centers } => {
                let centers: u128 = 1u128 << self.n;
                if centers > max_centers as u128 {
                    return Err(Error::BudgetExceeded {
                        required: centers,
                        budget: max_centers as u128,
                    });
                }
                let mut counts = alloc::vec![0u32; centers as usize];
                for &x in &self.words {
                    for y in x.ball(radius) {
                        counts[y.bits() as usize] += 1;
                    }
                }
                let mut witness = None;
                for (bits, &c) in counts.iter().enumerate() {
                    if c as usize > ell {
                        witness = Some(Word::new(self.n, bits as u64));
                        break;
                    }
                }
                Ok(ListDecodabilityReport {
                    ell,
                    radius,
                    holds: witness.is_none(),
                    witness,
                    exhaustive: true,
                    samples: centers as u64,
                })
            }
            ListDecodeMode::Sampled { samples, seed } => {
                let count_at = |y: Word| -> usize {
                    self.words
                        .iter()
                        .filter(|w| w.distance(y) <= radius)
                        .count()
                };
                let mut scanned = 0u64;
                let mut witness = None;
                'scan: {
                    for &x in &self.words {
                        for y in x.ball(1.min(self.n)) {
                            scanned += 1;
                            if count_at(y) > ell {
                                witness = Some(y);
                                break 'scan;
                            }
                        }
                    }
                    let mut rng = SplitMix64::new(seed);
                    for _ in 0..samples {
                        let y = uniform_word(&mut rng, self.n);
                        scanned += 1;
                        if count_at(y) > ell {
                            witness = Some(y);
                            break 'scan;
                        }
                    }
                }
                Ok(ListDecodabilityReport {
                    ell,
                    radius,
                    holds: witness.is_none(),
                    witness,
                    exhaustive: false,
                    samples: scanned,
                })
            }
        }
    }

    /// The largest ball count `max_y |C ∩ B(radius, y)|`, computed
    /// exhaustively. This is the tightest `ell` for which the codebook is
    /// `[ell, radius]` list decodable. Subject to the same center budget as
    /// exhaustive [`Self::check_list_decodable`].
    pub fn max_ball_count(&self, radius: u32, max_centers: u64) -> Result<usize> {
        assert!(radius <= self.n, "radius exceeds block length");
        let centers: u128 = 1u128 << self.n;
        if centers > max_centers as u128 {
            return Err(Error::BudgetExceeded {
                required: centers,
                budget: max_centers as u128,
            });
        }
        let mut counts = alloc::vec![0u32; centers as usize];
        for &x in &self.words {
            for y in x.ball(radius) {
                counts[y.bits() as usize] += 1;
            }
        }
        Ok(counts.iter().copied().max().unwrap_or(0) as usize)
    }
}

/// Default cap on exhaustive center scans (`2^22` centers).
pub const DEFAULT_CENTER_BUDGET: u64 = 1 << 22;

/// How to scan centers in [`Codebook::check_list_decodable`].
#[derive(Debug, Clone, Copy)]
pub enum ListDecodeMode {
    Exhaustive { max_centers: u64 },
    Sampled { samples: u64, seed: u64 },
}

/// Outcome of a list-decodability check.
#[derive(Debug, Clone)]
pub struct ListDecodabilityReport {
    pub ell: usize,
    pub radius: u32,
    /// No center with more than `ell` codewords in its ball was found.
    /// Conclusive only when `exhaustive` is true.
    pub holds: bool,
    /// A violating center, present iff `holds` is false.
    pub witness: Option<Word>,
    pub exhaustive: bool,
    /// Centers examined.
    pub samples: u64,
}
