//! Maximum input-output mutual information of a finite channel by
//! alternating maximization.
//!
//! For inputs `x` with transition law `Q(e | x)` taken from a [`Channel`],
//! computes `max_X I(X; Z)` over input distributions supported on the given
//! input list. Each iteration evaluates the standard lower functional
//! `I_L = sum_x p(x) c(x)` and upper functional `I_U = max_x c(x)` with
//! `c(x) = sum_e Q(e|x) log2(Q(e|x) / q(e))`; the gap `I_U - I_L` bounds the
//! distance to the maximum, and iteration stops once it drops below `tol`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::channel::Channel;
use crate::word::Word;

/// Result of the alternating-maximization solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfoResult {
    /// Achieved lower functional in bits (a lower bound on the maximum).
    pub bits: f64,
    /// Final `I_U - I_L` gap in bits.
    pub gap: f64,
    pub iterations: u64,
    /// False when `max_iter` elapsed before the gap fell below `tol`; the
    /// reported value is still a valid lower bound.
    pub converged: bool,
}

/// Default convergence tolerance in bits.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default iteration cap.
pub const DEFAULT_MAX_ITER: u64 = 100_000;

/// Maximizes `I(X; Z)` over distributions on `inputs`. Panics if `inputs`
/// is empty or lengths mismatch.
pub fn max_mutual_information(
    ch: &Channel,
    inputs: &[Word],
    tol: f64,
    max_iter: u64,
) -> MutualInfoResult {
    assert!(!inputs.is_empty(), "input list must be nonempty");
    assert!(
        inputs.iter().all(|x| x.len() == ch.n()),
        "input length mismatch"
    );
    let m = inputs.len();

    // Column index for every error word appearing in any reachable row.
    let mut col_of: BTreeMap<u64, usize> = BTreeMap::new();
    for &x in inputs {
        for &(e, _) in ch.distribution_for(x).support() {
            let next = col_of.len();
            col_of.entry(e.bits()).or_insert(next);
        }
    }
    let cols = col_of.len();
    let mut q_rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(m);
    for &x in inputs {
        let row: Vec<(usize, f64)> = ch
            .distribution_for(x)
            .support()
            .iter()
            .map(|&(e, p)| (col_of[&e.bits()], p))
            .collect();
        q_rows.push(row);
    }

    let mut p: Vec<f64> = alloc::vec![1.0 / m as f64; m];
    let mut c: Vec<f64> = alloc::vec![0.0; m];
    let mut q_out: Vec<f64> = alloc::vec![0.0; cols];
    let mut bits = 0.0;
    let mut gap = f64::INFINITY;
    let mut iters = 0u64;

    while iters < max_iter {
        iters += 1;
        for q in q_out.iter_mut() {
            *q = 0.0;
        }
        for (pi, row) in p.iter().zip(q_rows.iter()) {
            for &(j, v) in row {
                q_out[j] += pi * v;
            }
        }
        let mut lower = 0.0;
        let mut upper = f64::NEG_INFINITY;
        for (i, row) in q_rows.iter().enumerate() {
            let mut ci = 0.0;
            for &(j, v) in row {
                if q_out[j] > 0.0 {
                    ci += v * libm::log2(v / q_out[j]);
                }
            }
            c[i] = ci;
            lower += p[i] * ci;
            if ci > upper {
                upper = ci;
            }
        }
        bits = lower.max(0.0);
        gap = (upper - lower).max(0.0);
        if gap < tol {
            return MutualInfoResult {
                bits,
                gap,
                iterations: iters,
                converged: true,
            };
        }
        // Multiplicative update p(x) <- p(x) 2^{c(x)}, normalized; shift by
        // max(c) so the exponentials stay bounded.
        let c_max = upper;
        let mut total = 0.0;
        for (pi, &ci) in p.iter_mut().zip(c.iter()) {
            *pi *= libm::exp2(ci - c_max);
            total += *pi;
        }
        for pi in p.iter_mut() {
            *pi /= total;
        }
    }
    MutualInfoResult {
        bits,
        gap,
        iterations: iters,
        converged: false,
    }
}
