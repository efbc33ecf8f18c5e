//! Binary block codes under adversarial, partially oblivious channels.
//!
//! This crate provides the algorithmic core for experimenting with `[n, N]`
//! binary codebooks and power-limited jamming channels: packed bit-vector
//! words and Hamming geometry ([`word`]), seeded codebook sampling and
//! list-decodability checks ([`codebook`]), the nearest-neighbor decoder with
//! exact error evaluation ([`decoder`]), disturbed-set statistics over random
//! codebooks ([`disturbance`]), concrete channel constructions and attacks
//! ([`channel`], [`adversary`]), an alternating-maximization mutual
//! information solver ([`mutual_info`]), and closed-form rate/tail bound
//! evaluators ([`bounds`]).
//!
//! The crate is `no_std` (with `alloc`); all randomized routines run on an
//! explicitly seeded generator ([`rng`]) so every result is reproducible.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod adversary;
pub mod bounds;
pub mod channel;
pub mod codebook;
pub mod decoder;
pub mod disturbance;
pub mod math;
pub mod mutual_info;
pub mod rng;
pub mod word;

pub use adversary::{
    greedy_oblivious_adversary, linear_code_attack, matching_expurgation, AdversaryOutcome,
    CandidateMode, ExpurgationResult, LinearAttack,
};
pub use bounds::{
    bound_point, bsc_capacity, gamma_floor, gv_advantage_region, gv_rate, lemma22_threshold,
    lemma31_bound, listdec_params, theorem1_rate, vu_tail_bound, BoundPoint, GvAdvantageRegion,
    ListDecParams, VuTailBound,
};
pub use channel::{designated_error_channel, truncated_bsc, Channel, ErrorDistribution};
pub use codebook::{Codebook, ListDecodabilityReport, ListDecodeMode, Origin};
pub use decoder::{
    average_error, decode, max_error, message_error, simulate_error, DecodeResult, ErrorEstimate,
};
pub use disturbance::{
    disturbed_set, empirical_expectation, exact_expected_size, is_typical, prefix_error_word,
    single_swap_difference, ConcentrationStats, DisturbedSet,
};
pub use math::{ball_volume, binomial, entropy, floor_pn};
pub use mutual_info::{max_mutual_information, MutualInfoResult};
pub use rng::{derive_seed, SplitMix64, PRNG_ID};
pub use word::Word;

use core::fmt;

use alloc::string::String;

/// Errors reported by fallible operations.
///
/// Structural misuse (mismatched word lengths, out-of-range indices) panics
/// instead; these variants cover failures that depend on the data itself.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operation needs at least two codewords.
    TooFewWords,
    /// Operation requires a codebook with linear provenance.
    NotLinear,
    /// A linear-code operation found no nonzero codeword.
    AllZeroCode,
    /// No codeword of weight at most `2 * max_flips` exists, so the shifting
    /// attack cannot be mounted (the code has minimum distance > 2pn).
    AttackInfeasible { min_weight: u32, max_flips: u32 },
    /// The obliviousness parameter sits at or below the applicability floor
    /// `(2 + H(p)) / 3`; the rate bound makes no claim there.
    GammaBelowFloor { gamma: f64, floor: f64 },
    /// An exhaustive sweep would exceed the configured budget.
    BudgetExceeded { required: u128, budget: u128 },
    /// The tail-bound evaluator requires `lambda <= 4 * N`.
    LambdaTooLarge { lambda: f64, limit: f64 },
    /// A probability assignment failed validation.
    InvalidDistribution(&'static str),
    /// A channel parameter violates its documented domain.
    InvalidChannel(&'static str),
    /// Malformed textual input (words, headers, numbers).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TooFewWords => write!(f, "operation requires at least two codewords"),
            Error::NotLinear => write!(f, "codebook does not have linear provenance"),
            Error::AllZeroCode => write!(f, "linear code contains no nonzero codeword"),
            Error::AttackInfeasible {
                min_weight,
                max_flips,
            } => write!(
                f,
                "attack infeasible: lightest nonzero codeword has weight {min_weight} > 2*{max_flips}"
            ),
            Error::GammaBelowFloor { gamma, floor } => {
                write!(f, "gamma {gamma} is not above the applicability floor {floor}")
            }
            Error::BudgetExceeded { required, budget } => {
                write!(f, "exhaustive sweep needs {required} units, budget is {budget}")
            }
            Error::LambdaTooLarge { lambda, limit } => {
                write!(f, "lambda {lambda} exceeds the admissible limit {limit}")
            }
            Error::InvalidDistribution(msg) => write!(f, "invalid distribution: {msg}"),
            Error::InvalidChannel(msg) => write!(f, "invalid channel: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

#[cfg(any(test, feature = "std"))]
impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
