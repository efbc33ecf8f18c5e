//! Channels in the error view: each input word is assigned a finite-support
//! distribution over error words, and the received word is `x ^ e`.
//!
//! A [`Channel`] carries a family of `K` distinct [`ErrorDistribution`]s and
//! a total assignment from inputs to family members (an explicit map plus a
//! default). Obliviousness is `1 - log2(K_used)/n`, where `K_used` counts the
//! family members actually reachable; a constant channel has obliviousness 1.
//! A channel is a p-channel when every support word of every family member
//! has weight at most `floor(p*n)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::math::{ball_volume, floor_pn};
use crate::rng::SplitMix64;
use crate::word::Word;
use crate::{Error, Result};

/// A finite-support probability distribution over error words of a common
/// length. Support words are distinct, sorted lexicographically, carry
/// positive mass, and sum to 1 within `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDistribution {
    n: u32,
    support: Vec<(Word, f64)>,
}

impl ErrorDistribution {
    pub fn new(n: u32, mut support: Vec<(Word, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support"));
        }
        if support.iter().any(|(w, _)| w.len() != n) {
            return Err(Error::InvalidDistribution("support word length mismatch"));
        }
        if !support.iter().all(|&(_, p)| p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidDistribution(
                "probabilities must be positive and finite",
            ));
        }
        support.sort_by_key(|(w, _)| w.bits());
        if support.windows(2).any(|s| s[0].0 == s[1].0) {
            return Err(Error::InvalidDistribution("duplicate support word"));
        }
        let total: f64 = support.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution("probabilities do not sum to 1"));
        }
        Ok(ErrorDistribution { n, support })
    }

    /// The deterministic distribution concentrated on `e`.
    pub fn point_mass(e: Word) -> Self {
        ErrorDistribution {
            n: e.len(),
            support: alloc::vec![(e, 1.0)],
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Support pairs sorted lexicographically by word.
    #[inline]
    pub fn support(&self) -> &[(Word, f64)] {
        &self.support
    }

    /// Probability assigned to `e` (zero off the support).
    pub fn prob_of(&self, e: Word) -> f64 {
        match self
            .support
            .binary_search_by_key(&e.bits(), |(w, _)| w.bits())
        {
            Ok(i) => self.support[i].1,
            Err(_) => 0.0,
        }
    }

    /// Largest Hamming weight on the support.
    pub fn max_weight(&self) -> u32 {
        self.support
            .iter()
            .map(|(w, _)| w.weight())
            .max()
            .unwrap_or(0)
    }

    /// Draws one error by inverse CDF over the sorted support.
    pub fn sample(&self, rng: &mut SplitMix64) -> Word {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for &(w, p) in &self.support {
            acc += p;
            if u < acc {
                return w;
            }
        }
        self.support[self.support.len() - 1].0
    }

    fn same_as(&self, other: &ErrorDistribution) -> bool {
        self.n == other.n
            && self.support.len() == other.support.len()
            && self
                .support
                .iter()
                .zip(other.support.iter())
                .all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
    }
}

/// A channel: a family of `K` distinct error distributions plus a total
/// input assignment (explicit entries override the default index).
#[derive(Debug, Clone)]
pub struct Channel {
    n: u32,
    family: Vec<ErrorDistribution>,
    assign: BTreeMap<Word, usize>,
    default_index: usize,
}

impl Channel {
    pub fn new(
        n: u32,
        family: Vec<ErrorDistribution>,
        assign: BTreeMap<Word, usize>,
        default_index: usize,
    ) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidChannel("empty family"));
        }
        if family.iter().any(|d| d.n() != n) {
            return Err(Error::InvalidChannel("family member length mismatch"));
        }
        for i in 0..family.len() {
            for j in (i + 1)..family.len() {
                if family[i].same_as(&family[j]) {
                    return Err(Error::InvalidChannel("family members must be distinct"));
                }
            }
        }
        if default_index >= family.len()
            || assign.values().any(|&k| k >= family.len())
            || assign.keys().any(|x| x.len() != n)
        {
            return Err(Error::InvalidChannel("assignment out of range"));
        }
        Ok(Channel {
            n,
            family,
            assign,
            default_index,
        })
    }

    /// The fully oblivious channel imposing `dist` on every input.
    pub fn constant(dist: ErrorDistribution) -> Self {
        Channel {
            n: dist.n(),
            family: alloc::vec![dist],
            assign: BTreeMap::new(),
            default_index: 0,
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Family size `K`.
    #[inline]
    pub fn family_size(&self) -> usize {
        self.family.len()
    }

    #[inline]
    pub fn family(&self) -> &[ErrorDistribution] {
        &self.family
    }

    #[inline]
    pub fn assignments(&self) -> &BTreeMap<Word, usize> {
        &self.assign
    }

    #[inline]
    pub fn default_index(&self) -> usize {
        self.default_index
    }

    /// Family index used for input `x`.
    #[inline]
    pub fn index_for(&self, x: Word) -> usize {
        assert_eq!(x.len(), self.n, "input length mismatch");
        *self.assign.get(&x).unwrap_or(&self.default_index)
    }

    /// The error distribution imposed on input `x`.
    #[inline]
    pub fn distribution_for(&self, x: Word) -> &ErrorDistribution {
        &self.family[self.index_for(x)]
    }

    /// Number of family members reachable over the whole input cube.
    pub fn image_size(&self) -> usize {
        let mut used: alloc::collections::BTreeSet<usize> = self.assign.values().copied().collect();
        // The default is reachable unless explicit entries cover all 2^n inputs.
        if (self.assign.len() as u128) < (1u128 << self.n) {
            used.insert(self.default_index);
        }
        used.len()
    }

    /// Number of family members reachable from the given inputs.
    pub fn image_size_on(&self, inputs: &[Word]) -> usize {
        inputs
            .iter()
            .map(|&x| self.index_for(x))
            .collect::<alloc::collections::BTreeSet<usize>>()
            .len()
    }

    /// Obliviousness `1 - log2(K_used) / n` over the whole input cube.
    pub fn obliviousness(&self) -> f64 {
        1.0 - libm::log2(self.image_size() as f64) / self.n as f64
    }

    /// Obliviousness restricted to a relevant input set (e.g. a codebook).
    pub fn obliviousness_on(&self, inputs: &[Word]) -> f64 {
        1.0 - libm::log2(self.image_size_on(inputs) as f64) / self.n as f64
    }

    /// Largest support weight across the family.
    pub fn max_support_weight(&self) -> u32 {
        self.family
            .iter()
            .map(|d| d.max_weight())
            .max()
            .unwrap_or(0)
    }

    /// True when every family member is supported on `B(floor(p*n), 0)`.
    pub fn is_p_channel(&self, p: f64) -> bool {
        self.max_support_weight() <= floor_pn(p, self.n)
    }
}

/// The crossover-`p` bit-flip distribution conditioned on total weight at
/// most `floor(p*n)`: mass proportional to `p^w (1-p)^(n-w)`, renormalized
/// over the truncated support. Panics unless `0 <= p < 1/2`.
///
/// The truncation is renormalized because a restricted assignment that does
/// not sum to 1 is not a distribution; conditioning is the only coherent
/// reading.
pub fn truncated_bsc(n: u32, p: f64) -> ErrorDistribution {
    assert!(
        (0.0..0.5).contains(&p),
        "crossover must satisfy 0 <= p < 1/2"
    );
    let radius = floor_pn(p, n);
    let zero = Word::zero(n);
    let mut support: Vec<(Word, f64)> = Vec::new();
    let mut total = 0.0f64;
    for e in zero.ball(radius) {
        let w = e.weight();
        let mass =
            crate::math::pow_int(p, w as u64) * crate::math::pow_int(1.0 - p, (n - w) as u64);
        support.push((e, mass));
        total += mass;
    }
    for pair in &mut support {
        pair.1 /= total;
    }
    ErrorDistribution::new(n, support).expect("truncated distribution is valid")
}

/// Channel family exhibiting the gap between the image-size notion of
/// obliviousness and the mutual-information one: input `x` receives mass
/// `epsilon + alpha` on its designated error `e_x` and `alpha` on every
/// other error of weight at most `floor(p*n)`, where
/// `alpha = (1 - epsilon) / Vol(floor(p*n))`. Each row sums to exactly
/// `epsilon + Vol * alpha = 1`.
///
/// Inputs without an entry in `assignment` fall back to the row designated
/// by the zero error word.
pub fn designated_error_channel(
    n: u32,
    p: f64,
    epsilon: f64,
    assignment: &[(Word, Word)],
) -> Result<Channel> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidChannel("epsilon must lie in (0, 1)"));
    }
    let radius = floor_pn(p, n);
    if assignment
        .iter()
        .any(|&(x, e)| x.len() != n || e.len() != n || e.weight() > radius)
    {
        return Err(Error::InvalidChannel(
            "designated errors must have weight at most floor(p*n)",
        ));
    }
    let vol = ball_volume(n, radius);
    let alpha = (1.0 - epsilon) / vol as f64;
    let ball: Vec<Word> = Word::zero(n).ball(radius).collect();
    let row_for = |e_x: Word| -> ErrorDistribution {
        let support: Vec<(Word, f64)> = ball
            .iter()
            .map(|&e| (e, if e == e_x { epsilon + alpha } else { alpha }))
            .collect();
        ErrorDistribution::new(n, support).expect("row is a valid distribution")
    };

    let mut family: Vec<ErrorDistribution> = Vec::new();
    let mut index_of: BTreeMap<Word, usize> = BTreeMap::new();
    let mut intern = |e_x: Word, family: &mut Vec<ErrorDistribution>| -> usize {
        *index_of.entry(e_x).or_insert_with(|| {
            family.push(row_for(e_x));
            family.len() - 1
        })
    };

    let default_index = intern(Word::zero(n), &mut family);
    let mut assign = BTreeMap::new();
    for &(x, e_x) in assignment {
        let k = intern(e_x, &mut family);
        assign.insert(x, k);
    }
    Channel::new(n, family, assign, default_index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn point_mass_and_constant_channel() {
        let ch = Channel::constant(ErrorDistribution::point_mass(Word::zero(4)));
        assert_eq!(ch.family_size(), 1);
        assert_eq!(ch.image_size(), 1);
        assert_eq!(ch.obliviousness(), 1.0);
        assert_eq!(ch.distribution_for(w("1010")).prob_of(Word::zero(4)), 1.0);
        assert!(ch.is_p_channel(0.0));
    }

    #[test]
    fn distribution_validation() {
        let bad = ErrorDistribution::new(3, alloc::vec![(w("000"), 0.5), (w("000"), 0.5)]);
        assert!(matches!(bad, Err(Error::InvalidDistribution(_))));
        let off = ErrorDistribution::new(3, alloc::vec![(w("000"), 0.6), (w("001"), 0.5)]);
        assert!(matches!(off, Err(Error::InvalidDistribution(_))));
        let neg = ErrorDistribution::new(3, alloc::vec![(w("000"), 1.5), (w("001"), -0.5)]);
        assert!(matches!(neg, Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn truncated_bsc_degenerate_and_known_masses() {
        // floor(p*n) = 0 collapses to a point mass on the zero word.
        let d = truncated_bsc(6, 0.05);
        assert_eq!(d.support().len(), 1);
        assert_eq!(d.prob_of(Word::zero(6)), 1.0);

        // n = 4, p = 1/4: radius 1, normalized mass of 0000 is 81/189.
        let d = truncated_bsc(4, 0.25);
        assert_eq!(d.support().len(), 5);
        assert!((d.prob_of(Word::zero(4)) - 81.0 / 189.0).abs() < 1e-12);
        let total: f64 = d.support().iter().map(|&(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let one = d.prob_of(w("0001"));
        assert!((one - 27.0 / 189.0).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "crossover")]
    fn truncated_bsc_rejects_half() {
        let _ = truncated_bsc(4, 0.5);
    }

    #[test]
    fn obliviousness_counts_reachable_members() {
        let d0 = ErrorDistribution::point_mass(Word::zero(4));
        let d1 = ErrorDistribution::point_mass(w("0001"));
        let mut assign = BTreeMap::new();
        assign.insert(w("1111"), 1usize);
        let ch = Channel::new(4, alloc::vec![d0, d1], assign, 0).unwrap();
        assert_eq!(ch.image_size(), 2);
        assert!((ch.obliviousness() - 0.75).abs() < 1e-15);
        // Restricted to inputs that all hit the default, only one is used.
        assert_eq!(ch.image_size_on(&[w("0000"), w("0101")]), 1);
        assert_eq!(ch.obliviousness_on(&[w("0000"), w("0101")]), 1.0);
    }

    #[test]
    fn fully_informed_channel_has_zero_obliviousness() {
        let n = 3u32;
        let family: Vec<ErrorDistribution> = (0..8u64)
            .map(|b| ErrorDistribution::point_mass(Word::new(n, b)))
            .collect();
        let assign: BTreeMap<Word, usize> =
            (0..8u64).map(|b| (Word::new(n, b), b as usize)).collect();
        let ch = Channel::new(n, family, assign, 0).unwrap();
        assert_eq!(ch.image_size(), 8);
        assert_eq!(ch.obliviousness(), 0.0);
    }

    #[test]
    fn channel_rejects_duplicate_family() {
        let d0 = ErrorDistribution::point_mass(Word::zero(4));
        let d1 = ErrorDistribution::point_mass(Word::zero(4));
        let err = Channel::new(4, alloc::vec![d0, d1], BTreeMap::new(), 0);
        assert!(matches!(err, Err(Error::InvalidChannel(_))));
    }

    #[test]
    fn designated_error_rows_sum_to_one() {
        let n = 4;
        let assignment: Vec<(Word, Word)> = (0..16u64)
            .map(|b| (Word::new(n, b), Word::new(n, b & 0b0011)))
            .collect();
        let ch = designated_error_channel(n, 0.5, 0.3, &assignment).unwrap();
        for x in 0..16u64 {
            let row = ch.distribution_for(Word::new(n, x));
            let total: f64 = row.support().iter().map(|&(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!(ch.is_p_channel(0.5));
        // Identical designated errors collapse to one family member.
        let same: Vec<(Word, Word)> = (0..16u64)
            .map(|b| (Word::new(n, b), Word::zero(n)))
            .collect();
        let ch = designated_error_channel(n, 0.5, 0.3, &same).unwrap();
        assert_eq!(ch.image_size(), 1);
        assert_eq!(ch.obliviousness(), 1.0);
    }

    #[test]
    fn designated_error_weight_is_checked() {
        let err = designated_error_channel(4, 0.25, 0.3, &[(w("0000"), w("0011"))]);
        assert!(matches!(err, Err(Error::InvalidChannel(_))));
    }

    #[test]
    fn sampling_follows_the_masses() {
        let d = truncated_bsc(5, 0.3);
        let mut rng = SplitMix64::new(99);
        let trials = 200_000;
        let mut zero_hits = 0u32;
        for _ in 0..trials {
            if d.sample(&mut rng) == Word::zero(5) {
                zero_hits += 1;
            }
        }
        let p0 = d.prob_of(Word::zero(5));
        let sigma = (trials as f64 * p0 * (1.0 - p0)).sqrt();
        assert!((zero_hits as f64 - trials as f64 * p0).abs() < 4.0 * sigma);
    }
}
