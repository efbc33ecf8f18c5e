//! Scalar helpers: binomial coefficients, ball volumes, binary entropy, and
//! the floor-of-`p*n` convention shared by every channel constructor.

/// Exact binomial coefficient `C(n, k)` for `n <= 64`.
///
/// The running product stays below `C(64, 32) * 64 < 2^71`, so `u128`
/// arithmetic is exact.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Volume of a Hamming ball of radius `r` in `{0,1}^n`: the exact sum
/// `sum_{i=0}^{r} C(n, i)`. Panics if `r > n`.
pub fn ball_volume(n: u32, r: u32) -> u128 {
    assert!(r <= n, "ball radius exceeds dimension");
    (0..=r).map(|i| binomial(n, i)).sum()
}

/// Binary entropy in bits: `-x log2 x - (1-x) log2 (1-x)`, with the
/// convention `0 log 0 = 0` applied explicitly at both endpoints.
/// Panics outside `[0, 1]`.
pub fn entropy(x: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&x),
        "entropy argument must be in [0,1]"
    );
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * libm::log2(x) - (1.0 - x) * libm::log2(1.0 - x)
}

/// `floor(p * n)` with a `1e-9` nudge so fractions like `3/14 * 14` land on
/// the intended integer despite binary representation error.
pub fn floor_pn(p: f64, n: u32) -> u32 {
    assert!(p >= 0.0, "p must be nonnegative");
    let t = libm::floor(p * n as f64 + 1e-9);
    (t as u32).min(n)
}

/// `base^exp` by repeated squaring. Deterministic and exact whenever the
/// intermediate products are exactly representable.
pub fn pow_int(base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0f64;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= b;
        }
        b *= b;
        exp >>= 1;
    }
    acc
}

/// `log2(sum_i 2^{a_i})` computed stably from base-2 exponents.
pub fn log2_sum_exp2(terms: &[f64]) -> f64 {
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|&a| libm::exp2(a - m)).sum();
    m + libm::log2(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(64, 32), 1832624140942590534);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn ball_volume_examples() {
        for n in 1..=10 {
            assert_eq!(ball_volume(n, 0), 1);
        }
        assert_eq!(ball_volume(5, 1), 6);
        assert_eq!(ball_volume(10, 3), 176);
        assert_eq!(ball_volume(14, 3), 470);
        // Full-radius ball is the whole cube.
        assert_eq!(ball_volume(20, 20), 1u128 << 20);
        assert_eq!(ball_volume(64, 64), 1u128 << 64);
    }

    #[test]
    fn entropy_endpoints_and_known_values() {
        assert_eq!(entropy(0.0), 0.0);
        assert_eq!(entropy(1.0), 0.0);
        assert!((entropy(0.5) - 1.0).abs() < 1e-15);
        assert!((entropy(0.25) - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn entropy_is_symmetric_and_concave() {
        let mut x = 0.013f64;
        while x < 1.0 {
            assert!((entropy(x) - entropy(1.0 - x)).abs() < 1e-12);
            x += 0.0137;
        }
        let mut a = 0.05f64;
        while a < 0.9 {
            let b = a + 0.07;
            let mid = entropy(0.5 * (a + b));
            assert!(mid + 1e-12 >= 0.5 * (entropy(a) + entropy(b)));
            a += 0.083;
        }
    }

    #[test]
    fn ball_volume_entropy_bound() {
        // Vol(n, r) <= 2^{H(r/n) n} for 0 < r/n <= 1/2.
        for n in 1..=16u32 {
            for r in 1..=(n / 2) {
                let vol = ball_volume(n, r) as f64;
                let bound = libm::exp2(entropy(r as f64 / n as f64) * n as f64);
                assert!(
                    vol <= bound * (1.0 + 1e-12),
                    "volume bound failed at n={n} r={r}"
                );
            }
        }
    }

    #[test]
    fn floor_pn_rounds_down_with_guard() {
        assert_eq!(floor_pn(3.0 / 14.0, 14), 3);
        assert_eq!(floor_pn(1.0 / 12.0, 12), 1);
        assert_eq!(floor_pn(0.2142, 14), 2);
        assert_eq!(floor_pn(0.0, 10), 0);
        assert_eq!(floor_pn(0.49, 2), 0);
        assert_eq!(floor_pn(1.0, 8), 8);
    }

    #[test]
    fn pow_int_matches_repeated_multiplication() {
        // Exact while the product fits the mantissa (0.9375 has 4 bits).
        let mut acc = 1.0;
        for e in 0..=13u64 {
            assert_eq!(pow_int(0.9375, e), acc);
            acc *= 0.9375;
        }
        for e in [20u64, 57, 200] {
            let direct = (0..e).fold(1.0, |a, _| a * 0.9375);
            assert!((pow_int(0.9375, e) - direct).abs() <= 1e-15 * direct.abs());
        }
        assert_eq!(pow_int(0.0, 0), 1.0);
    }

    #[test]
    fn log2_sum_exp2_agrees_with_direct_sum() {
        let terms = [-3.0, -1.0, -2.0];
        let direct: f64 = terms.iter().map(|&a| libm::exp2(a)).sum();
        assert!((log2_sum_exp2(&terms) - libm::log2(direct)).abs() < 1e-12);
        // Stable far below the representable range.
        let tiny = [-20000.0, -20001.0];
        let got = log2_sum_exp2(&tiny);
        assert!((got - (-20000.0 + libm::log2(1.5))).abs() < 1e-9);
    }
}
