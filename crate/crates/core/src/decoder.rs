//! Nearest-neighbor decoding and exact error evaluation.
//!
//! The decoder scans the codebook linearly and returns the closest codeword;
//! ties go to the lexicographically least word, and among duplicate words to
//! the smallest index. Error probabilities are evaluated in the error view
//! `y = x ^ e`, summing channel mass over the finite support exactly.

use crate::channel::Channel;
use crate::codebook::Codebook;
use crate::rng::{derive_seed, SplitMix64};
use crate::word::Word;

/// Result of decoding a received word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeResult {
    /// Index of the decoded codeword.
    pub index: usize,
    /// Distance from the received word to that codeword.
    pub dist: u32,
    /// Number of codewords achieving the minimum distance.
    pub tie_count: usize,
}

/// Decodes `y` against `cb` by linear scan. Panics on length mismatch.
pub fn decode(cb: &Codebook, y: Word) -> DecodeResult {
    assert_eq!(y.len(), cb.n(), "received word length mismatch");
    let words = cb.words();
    let mut index = 0usize;
    let mut best = y.distance(words[0]);
    let mut tie_count = 1usize;
    for (i, &x) in words.iter().enumerate().skip(1) {
        let d = y.distance(x);
        if d < best {
            best = d;
            index = i;
            tie_count = 1;
        } else if d == best {
            tie_count += 1;
            if x.bits() < words[index].bits() {
                index = i;
            }
        }
    }
    DecodeResult {
        index,
        dist: best,
        tie_count,
    }
}

/// Exact probability that message `i` is decoded incorrectly under `ch`:
/// the sum of `W(e | x_i)` over support errors `e` with
/// `decode(x_i ^ e) != i`.
pub fn message_error(cb: &Codebook, i: usize, ch: &Channel) -> f64 {
    assert!(i < cb.num_words(), "message index out of range");
    assert_eq!(cb.n(), ch.n(), "codebook/channel length mismatch");
    let x = cb.word(i);
    let dist = ch.distribution_for(x);
    let mut err = 0.0;
    for &(e, p) in dist.support() {
        if decode(cb, x ^ e).index != i {
            err += p;
        }
    }
    err
}

/// Mean of [`message_error`] over all messages.
pub fn average_error(cb: &Codebook, ch: &Channel) -> f64 {
    let n = cb.num_words();
    let sum: f64 = (0..n).map(|i| message_error(cb, i, ch)).sum();
    sum / n as f64
}

/// Maximum of [`message_error`] over all messages.
pub fn max_error(cb: &Codebook, ch: &Channel) -> f64 {
    (0..cb.num_words())
        .map(|i| message_error(cb, i, ch))
        .fold(0.0, f64::max)
}

/// Monte Carlo estimate of the average error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub estimate: f64,
    /// Binomial standard error `sqrt(est (1-est) / trials)`.
    pub std_error: f64,
    pub trials: u64,
    pub failures: u64,
}

/// Samples `trials` (message, error) pairs and reports the failure
/// frequency. Trial `t` runs on the stream derived from `(seed, t)`, so the
/// result is independent of evaluation order and worker count.
pub fn simulate_error(cb: &Codebook, ch: &Channel, trials: u64, seed: u64) -> ErrorEstimate {
    assert!(trials >= 1, "at least one trial required");
    let failures = (0..trials)
        .filter(|&t| simulate_one(cb, ch, seed, t))
        .count() as u64;
    estimate_from_failures(trials, failures)
}

/// Single simulation trial; exposed so harnesses can distribute trials and
/// aggregate counts in index order.
pub fn simulate_one(cb: &Codebook, ch: &Channel, seed: u64, trial: u64) -> bool {
    let mut rng = SplitMix64::new(derive_seed(seed, trial));
    let i = rng.below(cb.num_words() as u64) as usize;
    let x = cb.word(i);
    let e = ch.distribution_for(x).sample(&mut rng);
    decode(cb, x ^ e).index != i
}

/// Folds a failure count into an [`ErrorEstimate`].
pub fn estimate_from_failures(trials: u64, failures: u64) -> ErrorEstimate {
    let estimate = failures as f64 / trials as f64;
    ErrorEstimate {
        estimate,
        std_error: libm::sqrt(estimate * (1.0 - estimate) / trials as f64),
        trials,
        failures,
    }
}
