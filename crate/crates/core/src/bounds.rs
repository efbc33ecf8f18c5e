//! Closed-form rate, threshold, and tail-bound evaluators.
//!
//! Everything here is pure arithmetic on the experiment parameters: the
//! achievable-rate landscape (`gamma - H(p)` against the Gilbert-Varshamov
//! and crossover-capacity curves), the expected-disturbance bound
//! `2^{(H(p)+2R-1)n}`, the communication threshold `eps 2^{(R-(1-gamma))n}`,
//! the concentration tail `2 e^{-lambda/4} + p1 + p2`, and list-decodability
//! parameters for random codes. Large exponents are evaluated in base-2 log
//! space and reported both ways.

use alloc::vec::Vec;

use crate::math::{ball_volume, entropy, floor_pn, log2_sum_exp2};
use crate::{Error, Result};

const LOG2_E: f64 = core::f64::consts::LOG2_E;

/// Applicability floor `(2 + H(p)) / 3` for the rate bound; always in
/// `[2/3, 1]`.
pub fn gamma_floor(p: f64) -> f64 {
    (2.0 + entropy(p)) / 3.0
}

/// Achievable rate `gamma - H(p)` for gamma-oblivious p-channel families.
/// Errors with [`Error::GammaBelowFloor`] at or below the applicability
/// floor rather than silently clamping.
pub fn theorem1_rate(p: f64, gamma: f64) -> Result<f64> {
    assert!((0.0..0.5).contains(&p), "p must lie in [0, 1/2)");
    assert!((0.0..=1.0).contains(&gamma), "gamma must lie in [0, 1]");
    let floor = gamma_floor(p);
    if gamma <= floor {
        return Err(Error::GammaBelowFloor { gamma, floor });
    }
    Ok(gamma - entropy(p))
}

/// Crossover capacity `1 - H(p)` of the fully oblivious family.
pub fn bsc_capacity(p: f64) -> f64 {
    assert!((0.0..0.5).contains(&p), "p must lie in [0, 1/2)");
    1.0 - entropy(p)
}

/// Gilbert-Varshamov style rate `1 - H(2p)`, clamped at zero with a flag
/// beyond its meaningful domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GvRate {
    pub rate: f64,
    /// True when p > 1/4, where the distance-2pn requirement exhausts the
    /// bound and the rate is reported as zero.
    pub clamped: bool,
}

pub fn gv_rate(p: f64) -> GvRate {
    assert!((0.0..0.5).contains(&p), "p must lie in [0, 1/2)");
    if p > 0.25 {
        GvRate {
            rate: 0.0,
            clamped: true,
        }
    } else {
        GvRate {
            rate: 1.0 - entropy(2.0 * p),
            clamped: false,
        }
    }
}

/// Comparison curve `1 - H(p) - 30 (1 - gamma)` from the types-method
/// machinery; exposed as a labeled reference curve only.
pub fn csiszar_narayan_rate(p: f64, gamma: f64) -> f64 {
    1.0 - entropy(p) - 30.0 * (1.0 - gamma)
}

/// One grid point of the rate landscape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPoint {
    pub p: f64,
    pub gamma: f64,
    /// `gamma - H(p)` when gamma clears the floor, absent otherwise.
    pub theorem1: Option<f64>,
    pub gamma_floor: f64,
    pub gv_rate: f64,
    pub gv_clamped: bool,
    pub bsc_capacity: f64,
    pub cn_comparison: f64,
}

/// Evaluates every named quantity at `(p, gamma)`.
pub fn bound_point(p: f64, gamma: f64) -> BoundPoint {
    let gv = gv_rate(p);
    BoundPoint {
        p,
        gamma,
        theorem1: theorem1_rate(p, gamma).ok(),
        gamma_floor: gamma_floor(p),
        gv_rate: gv.rate,
        gv_clamped: gv.clamped,
        bsc_capacity: bsc_capacity(p),
        cn_comparison: csiszar_narayan_rate(p, gamma),
    }
}

/// One p-slice of the region where the Gilbert-Varshamov rate beats
/// `gamma - H(p)` for some admissible gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GvRegionPoint {
    pub p: f64,
    pub nonempty: bool,
    /// Admissible gamma interval `[gamma_lo, gamma_hi)` when nonempty.
    pub gamma_lo: f64,
    pub gamma_hi: f64,
}

/// Grid sweep of the advantage region plus the bisected supremum p.
#[derive(Debug, Clone, PartialEq)]
pub struct GvAdvantageRegion {
    pub points: Vec<GvRegionPoint>,
    /// Supremum p below which the region is nonempty, from bisection on
    /// `3 H(2p) - 1 - 2 H(p)`.
    pub sup_p: f64,
}

/// The region is nonempty at p iff `(2 + H(p))/3 < 1 - H(2p) + H(p)`,
/// equivalently `3 H(2p) < 1 + 2 H(p)`. Sweeps p over a grid with the given
/// step and bisects the boundary crossing to within `1e-9`.
pub fn gv_advantage_region(resolution: f64) -> GvAdvantageRegion {
    assert!(resolution > 0.0, "resolution must be positive");
    let margin = |p: f64| 3.0 * entropy((2.0 * p).min(1.0)) - 1.0 - 2.0 * entropy(p);
    let mut points = Vec::new();
    let mut p = resolution;
    while p < 0.25 {
        let lo = gamma_floor(p);
        let hi = 1.0 + entropy(p) - entropy((2.0 * p).min(1.0));
        points.push(GvRegionPoint {
            p,
            nonempty: margin(p) < 0.0,
            gamma_lo: lo,
            gamma_hi: hi,
        });
        p += resolution;
    }
    // margin(0+) -> -1 and margin(0.25) > 0; bisect the sign change.
    let mut a = 1e-9;
    let mut b = 0.25 - 1e-9;
    debug_assert!(margin(a) < 0.0 && margin(b) > 0.0);
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        if margin(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    GvAdvantageRegion {
        points,
        sup_p: 0.5 * (a + b),
    }
}

/// Expected-disturbance bound `2^{(H(p) + 2R - 1) n}`.
pub fn lemma31_bound(n: u32, rate: f64, p: f64) -> f64 {
    libm::exp2(lemma31_bound_log2(n, rate, p))
}

/// Base-2 logarithm of [`lemma31_bound`].
pub fn lemma31_bound_log2(n: u32, rate: f64, p: f64) -> f64 {
    (entropy(p) + 2.0 * rate - 1.0) * n as f64
}

/// Communication threshold `epsilon 2^{(R - (1 - gamma)) n}`: if every
/// error of weight at most `floor(p*n)` disturbs at most this many
/// codewords, the codebook communicates over every gamma-oblivious
/// p-channel within average error epsilon.
///
/// The exponent reading `(R - (1 - gamma)) * n` is forced by the summation
/// that proves the threshold sufficient: a family of `K = 2^{(1-gamma)n}`
/// distributions contributes `(K/N) * threshold = epsilon` exactly.
pub fn lemma22_threshold(n: u32, rate: f64, gamma: f64, epsilon: f64) -> f64 {
    assert!(epsilon >= 0.0, "epsilon must be nonnegative");
    epsilon * libm::exp2((rate - (1.0 - gamma)) * n as f64)
}

/// Concentration tail evaluated at deviation `(ell + 3) sqrt(lambda N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VuTailBound {
    /// Deviation `(ell + 3) sqrt(lambda N)` the tail probability refers to.
    pub deviation: f64,
    /// `2 e^{-lambda/4} + p1 + p2` in linear scale (may round to 0 or inf).
    pub tail_bound: f64,
    /// Base-2 logarithm of the tail bound, computed stably.
    pub tail_bound_log2: f64,
    /// log2 of the martingale term `2 e^{-lambda/4}`.
    pub martingale_term_log2: f64,
    /// log2 of the bad-conditional bound `p1 <= 2^{-n^2} M N`, `M = 2^n`.
    pub p1_log2: f64,
    /// log2 of the bad-average bound `p2 <= M 2^{-n^2}`.
    pub p2_log2: f64,
}

/// Evaluates the tail expression; errors when `lambda > 4 N`.
pub fn vu_tail_bound(n: u32, num_words: u64, ell: u64, lambda: f64) -> Result<VuTailBound> {
    if lambda > 4.0 * num_words as f64 {
        return Err(Error::LambdaTooLarge {
            lambda,
            limit: 4.0 * num_words as f64,
        });
    }
    Ok(vu_tail_terms(n, num_words, ell, lambda))
}

/// The raw tail expression without the `lambda <= 4N` admissibility check,
/// for reporting at configurations outside the valid range.
pub fn vu_tail_terms(n: u32, num_words: u64, ell: u64, lambda: f64) -> VuTailBound {
    assert!(lambda >= 0.0, "lambda must be nonnegative");
    let nf = n as f64;
    let deviation = (ell as f64 + 3.0) * libm::sqrt(lambda * num_words as f64);
    let martingale_term_log2 = 1.0 - (lambda / 4.0) * LOG2_E;
    let p1_log2 = -nf * nf + nf + libm::log2(num_words as f64);
    let p2_log2 = nf - nf * nf;
    let tail_bound_log2 = log2_sum_exp2(&[martingale_term_log2, p1_log2, p2_log2]);
    VuTailBound {
        deviation,
        tail_bound: libm::exp2(tail_bound_log2),
        tail_bound_log2,
        martingale_term_log2,
        p1_log2,
        p2_log2,
    }
}

/// List-decodability parameters of random `[n, 2^{Rn}]` codebooks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ListDecParams {
    /// The fixed quadratic list size `12 n^2`.
    pub ell_quadratic: u64,
    /// `max(ceil(Vol(floor(p*n)) 2^{-n+Rn+1}), c n^2)`: twice the expected
    /// ball intersection, floored at `c n^2`.
    pub ell_general: u64,
    /// Failure bound `e^{-ell/6} 2^n` for `ell = ell_general`, linear.
    pub failure_prob: f64,
    /// Base-2 logarithm of the failure bound.
    pub failure_prob_log2: f64,
}

/// Evaluates the list-size choices at rate `rate` and radius fraction `p`,
/// with `c` the universal constant for the quadratic floor (12 aligns the
/// two list-size statements).
pub fn listdec_params(n: u32, rate: f64, p: f64, c: f64) -> ListDecParams {
    assert!(c > 0.0, "constant c must be positive");
    let nf = n as f64;
    let radius = floor_pn(p, n);
    let vol_log2 = libm::log2(ball_volume(n, radius) as f64);
    let expectation_branch = libm::exp2(vol_log2 + rate * nf + 1.0 - nf);
    let quadratic_branch = c * nf * nf;
    let ell_general = libm::ceil(expectation_branch.max(quadratic_branch)) as u64;
    let failure_prob_log2 = nf - (ell_general as f64 / 6.0) * LOG2_E;
    ListDecParams {
        ell_quadratic: 12 * (n as u64) * (n as u64),
        ell_general,
        failure_prob: libm::exp2(failure_prob_log2),
        failure_prob_log2,
    }
}
