//! Disturbed sets and their statistics over random codebooks.
//!
//! A codeword `x_i` is disturbed by the error `e` when some other codeword
//! lies within distance `||e||` of `x_i ^ e`; the set of disturbed indices
//! is `A_e(C)`. Membership over-approximates nearest-neighbor decoding
//! failure: a tie can rescue a disturbed codeword, and the converse never
//! fails. The condition is symmetric in `(i, j)` since
//! `||x_j ^ (x_i ^ e)|| = ||x_i ^ (x_j ^ e)||`, so disturbance arrives in
//! conflict pairs.
//!
//! Over `Ω[n, N]` (iid uniform ordered codebooks) the expected size has the
//! closed form `N (1 - (1 - V/2^n)^(N-1))` with `V = Vol(n, ||e||)`, exposed
//! here as a first-class oracle next to the Monte Carlo estimator.

use alloc::string::String;
use alloc::vec::Vec;

use crate::codebook::{Codebook, ListDecodeMode};
use crate::math::{ball_volume, entropy, pow_int};
use crate::rng::{derive_seed, uniform_word, SplitMix64, PRNG_ID};
use crate::word::Word;
use crate::Result;

/// The set of codeword indices disturbed by a fixed error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisturbedSet {
    pub error: Word,
    /// Disturbed indices in increasing order.
    pub indices: Vec<usize>,
}

impl DisturbedSet {
    #[inline]
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// Computes `A_e(C)` exactly. Panics on length mismatch.
pub fn disturbed_set(cb: &Codebook, e: Word) -> DisturbedSet {
    assert_eq!(e.len(), cb.n(), "error length mismatch");
    let flags = disturbed_flags(cb, e);
    DisturbedSet {
        error: e,
        indices: flags
            .iter()
            .enumerate()
            .filter_map(|(i, &d)| d.then_some(i))
            .collect(),
    }
}

/// `|A_e(C)|` without materializing the index list.
pub fn disturbed_size(cb: &Codebook, e: Word) -> usize {
    assert_eq!(e.len(), cb.n(), "error length mismatch");
    disturbed_flags(cb, e).iter().filter(|&&d| d).count()
}

fn disturbed_flags(cb: &Codebook, e: Word) -> Vec<bool> {
    let words = cb.words();
    let w = e.weight();
    let mut flags = alloc::vec![false; words.len()];
    for i in 0..words.len() {
        let shifted = words[i] ^ e;
        for j in (i + 1)..words.len() {
            if shifted.distance(words[j]) <= w {
                flags[i] = true;
                flags[j] = true;
            }
        }
    }
    flags
}

/// The canonical weight-`w` error: the `w` lowest-index positions set. By
/// the permutation symmetry of `Ω[n, N]`, the law of `|A_e|` depends on `e`
/// only through its weight, so experiments fix this representative.
pub fn prefix_error_word(n: u32, w: u32) -> Word {
    Word::prefix_ones(n, w)
}

/// Exact `E[|A_e|]` over `Ω[n, N]` for an error of weight `w`:
/// `N (1 - (1 - V/2^n)^(N-1))`. Exact because, conditioned on `x_i`, the
/// other `N - 1` codewords independently land in the ball around `x_i ^ e`
/// with probability `V / 2^n`.
pub fn exact_expected_size(n: u32, num_words: usize, w: u32) -> f64 {
    assert!(w <= n, "error weight exceeds block length");
    assert!(num_words >= 1, "codebook needs at least one word");
    let vol = ball_volume(n, w) as f64;
    let cube = (1u128 << n) as f64;
    let miss = 1.0 - vol / cube;
    num_words as f64 * (1.0 - pow_int(miss, (num_words - 1) as u64))
}

/// One `Ω[n, N]` trial: sample a codebook from the given stream seed and
/// return `|A_e|` for the canonical weight-`w` error.
pub fn sample_disturbed_size(n: u32, num_words: usize, w: u32, stream_seed: u64) -> usize {
    let cb = Codebook::sample_random(n, num_words, stream_seed);
    disturbed_size(&cb, prefix_error_word(n, w))
}

/// Measured concentration of `|A_e|` over sampled codebooks.
///
/// The deviation threshold is `2^{(H(w/n) + 2R - 1) n}` with `R = log2(N)/n`,
/// and the tail counts trials with `|A_e| - E[|A_e|] > threshold`, centered
/// on the exact expectation.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationStats {
    pub n: u32,
    pub num_words: usize,
    pub error_weight: u32,
    pub trials: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    pub empirical_max: usize,
    /// Sample standard deviation of `|A_e|`.
    pub sample_std: f64,
    /// Exact `E[|A_e|]` from the closed form.
    pub exact_mean: f64,
    pub deviation_threshold: f64,
    pub tail_frequency: f64,
}

impl ConcentrationStats {
    /// Aggregates per-trial sizes (trial `t` drawn from `derive_seed(seed, t)`).
    pub fn from_samples(n: u32, num_words: usize, w: u32, seed: u64, sizes: &[usize]) -> Self {
        assert!(!sizes.is_empty(), "at least one trial required");
        let trials = sizes.len() as u64;
        let sum: u64 = sizes.iter().map(|&s| s as u64).sum();
        let empirical_mean = sum as f64 / trials as f64;
        let empirical_max = sizes.iter().copied().max().unwrap_or(0);
        let var_num: f64 = sizes
            .iter()
            .map(|&s| {
                let d = s as f64 - empirical_mean;
                d * d
            })
            .sum();
        let sample_std = if trials > 1 {
            libm::sqrt(var_num / (trials - 1) as f64)
        } else {
            0.0
        };
        let exact_mean = exact_expected_size(n, num_words, w);
        let rate = libm::log2(num_words as f64) / n as f64;
        let exponent = (entropy(w as f64 / n as f64) + 2.0 * rate - 1.0) * n as f64;
        let deviation_threshold = libm::exp2(exponent);
        let tail = sizes
            .iter()
            .filter(|&&s| s as f64 - exact_mean > deviation_threshold)
            .count();
        ConcentrationStats {
            n,
            num_words,
            error_weight: w,
            trials,
            seed,
            empirical_mean,
            empirical_max,
            sample_std,
            exact_mean,
            deviation_threshold,
            tail_frequency: tail as f64 / trials as f64,
        }
    }

    /// Fixed CSV column order; see [`ConcentrationStats::csv_row`].
    pub fn csv_header() -> &'static str {
        "n,num_words,error_weight,trials,seed,empirical_mean,empirical_max,sample_std,exact_mean,deviation_threshold,tail_frequency,prng"
    }

    /// One CSV row matching [`ConcentrationStats::csv_header`].
    pub fn csv_row(&self) -> String {
        alloc::format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.num_words,
            self.error_weight,
            self.trials,
            self.seed,
            self.empirical_mean,
            self.empirical_max,
            self.sample_std,
            self.exact_mean,
            self.deviation_threshold,
            self.tail_frequency,
            PRNG_ID,
        )
    }
}

/// Runs `trials` independent `Ω[n, N]` draws and aggregates them. Trial `t`
/// uses the stream derived from `(seed, t)`, so two runs with the same seed
/// are identical regardless of scheduling.
pub fn empirical_expectation(
    n: u32,
    num_words: usize,
    w: u32,
    trials: u64,
    seed: u64,
) -> ConcentrationStats {
    assert!(trials >= 1, "at least one trial required");
    let sizes: Vec<usize> = (0..trials)
        .map(|t| sample_disturbed_size(n, num_words, w, derive_seed(seed, t)))
        .collect();
    ConcentrationStats::from_samples(n, num_words, w, seed, &sizes)
}

/// `| |A_e(C(i,x))| - |A_e(C)| |` where `C(i,x)` replaces the `i`-th
/// codeword by `x`.
pub fn single_swap_difference(cb: &Codebook, i: usize, x: Word, e: Word) -> usize {
    let before = disturbed_size(cb, e);
    let after = disturbed_size(&cb.replaced(i, x), e);
    before.abs_diff(after)
}

/// Signed conditional-expectation difference
/// `E[|A_e| : prefix, x_i = x] - E[|A_e| : prefix]`, computed exhaustively
/// over all completions. The slot being conditioned is `i = prefix.len()`
/// (zero-based); `num_words` is the total codebook size `N >= i + 1`.
///
/// Enumerates `2^{n (N - i)}` completions (slot `i` plus the suffix), so the
/// caller must keep `n * (N - prefix.len())` small; panics beyond 26 bits.
pub fn delta_exact_signed(prefix: &[Word], num_words: usize, x: Word, e: Word) -> f64 {
    let n = x.len();
    let i = prefix.len();
    assert!(num_words > i, "prefix already fills the codebook");
    assert!(
        prefix.iter().all(|w| w.len() == n),
        "prefix length mismatch"
    );
    let free_slots = num_words - i; // slot i plus the suffix
    let free_bits = n as usize * free_slots;
    assert!(free_bits <= 26, "exhaustive completion budget exceeded");

    let mut words: Vec<Word> = prefix.to_vec();
    words.resize(num_words, Word::zero(n));

    let suffix_bits = n as usize * (free_slots - 1);
    let mut sum_fixed = 0u64; // sum of |A_e| with slot i fixed to x
    let mut sum_free = 0u64; // sum of |A_e| with slot i free
    for assignment in 0u64..(1u64 << free_bits) {
        for s in 0..free_slots {
            let chunk = (assignment >> (n as usize * s)) & crate::word::low_mask(n);
            words[i + s] = Word::new(n, chunk);
        }
        let cb = Codebook::explicit(n, words.clone());
        sum_free += disturbed_size(&cb, e) as u64;
        // Fixed-slot sum: only count assignments whose slot-i chunk equals x
        // once per suffix; equivalently replace slot i by x for every suffix
        // exactly once. Do that when the slot-i chunk is zero to avoid a
        // second enumeration pass.
        if assignment & crate::word::low_mask(n) == 0 {
            words[i] = x;
            let cb = Codebook::explicit(n, words.clone());
            sum_fixed += disturbed_size(&cb, e) as u64;
        }
    }
    let m_free = (1u64 << free_bits) as f64;
    let m_suffix = (1u64 << suffix_bits) as f64;
    sum_fixed as f64 / m_suffix - sum_free as f64 / m_free
}

/// Magnitude of [`delta_exact_signed`].
pub fn delta_exact(prefix: &[Word], num_words: usize, x: Word, e: Word) -> f64 {
    libm::fabs(delta_exact_signed(prefix, num_words, x, e))
}

/// Monte Carlo estimate of the conditional-expectation difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    /// `|mean of coupled differences|`.
    pub estimate: f64,
    /// Standard error of the coupled-difference mean.
    pub std_error: f64,
    pub completions: u64,
}

/// Estimates `|E[|A_e| : prefix, x_i = x] - E[|A_e| : prefix]|` with
/// `completions` coupled draws: each draw samples slot `i` and the suffix
/// uniformly, evaluates `|A_e|`, then re-evaluates with slot `i` replaced by
/// `x` on the same suffix. Coupling makes the degenerate no-suffix case
/// exact per draw and matches the single-swap semantics.
pub fn estimate_delta(
    prefix: &[Word],
    num_words: usize,
    x: Word,
    e: Word,
    completions: u64,
    seed: u64,
) -> DeltaEstimate {
    assert!(completions >= 1, "at least one completion required");
    let n = x.len();
    let i = prefix.len();
    assert!(num_words > i, "prefix already fills the codebook");
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for t in 0..completions {
        let mut rng = SplitMix64::new(derive_seed(seed, t));
        let mut words: Vec<Word> = prefix.to_vec();
        for _ in i..num_words {
            words.push(uniform_word(&mut rng, n));
        }
        let free = disturbed_size(&Codebook::explicit(n, words.clone()), e) as f64;
        words[i] = x;
        let fixed = disturbed_size(&Codebook::explicit(n, words), e) as f64;
        let diff = fixed - free;
        sum += diff;
        sum_sq += diff * diff;
    }
    let mean = sum / completions as f64;
    let std_error = if completions > 1 {
        let var = (sum_sq - sum * sum / completions as f64) / (completions - 1) as f64;
        libm::sqrt(var.max(0.0) / completions as f64)
    } else {
        0.0
    };
    DeltaEstimate {
        estimate: libm::fabs(mean),
        std_error,
        completions,
    }
}

/// A codebook is typical for `(ell, radius)` when it is `[ell, radius]`
/// list decodable; checked exhaustively.
pub fn is_typical(cb: &Codebook, ell: usize, radius: u32, max_centers: u64) -> Result<bool> {
    let rep = cb.check_list_decodable(ell, radius, ListDecodeMode::Exhaustive { max_centers })?;
    Ok(rep.holds)
}
