//! Concrete jamming constructions: the shifting attack on linear codes, the
//! matching-based expurgation channel, and a greedy coverage-maximizing
//! adversary with a bounded distribution budget.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::channel::{Channel, ErrorDistribution};
use crate::codebook::{Codebook, Origin};
use crate::decoder::{average_error, decode};
use crate::math::{ball_volume, floor_pn};
use crate::rng::SplitMix64;
use crate::word::Word;
use crate::{Error, Result};

/// Outcome of [`linear_code_attack`].
#[derive(Debug, Clone)]
pub struct LinearAttack {
    /// The constant point-mass channel achieving average error >= 1/2.
    pub channel: Channel,
    /// The error word the channel imposes.
    pub error: Word,
    /// Exact average error of the attacked codebook under `channel`.
    pub average_error: f64,
}

/// Jams a linear code whose minimum distance is at most `2 floor(p*n)`.
///
/// Takes the lightest nonzero codeword `x*` (weight `v <= 2 floor(p*n)`),
/// splits it as `e1` = its `ceil(v/2)` lowest-index support positions and
/// `e2 = x* ^ e1` (both of weight at most `floor(p*n)`), and returns
/// whichever constant point-mass channel forces average error at least 1/2
/// under nearest-neighbor decoding; `e1` wins ties. Because the shift
/// `x -> x ^ x*` permutes the codebook, the two channels' average errors
/// always sum to at least 1.
///
/// Errors with [`Error::AttackInfeasible`] when no nonzero codeword of
/// weight at most `2 floor(p*n)` exists (minimum distance too large), and
/// [`Error::NotLinear`] for non-linear provenance.
pub fn linear_code_attack(cb: &Codebook, p: f64) -> Result<LinearAttack> {
    if cb.origin() != Origin::Linear {
        return Err(Error::NotLinear);
    }
    let max_flips = floor_pn(p, cb.n());
    let star = cb.min_weight_nonzero()?;
    let v = star.weight();
    if v > 2 * max_flips {
        return Err(Error::AttackInfeasible {
            min_weight: v,
            max_flips,
        });
    }
    let half = v.div_ceil(2);
    let mut e1 = Word::zero(cb.n());
    for (taken, pos) in star.support().enumerate() {
        if (taken as u32) < half {
            e1 = e1.with_flipped(pos);
        }
    }
    let e2 = star ^ e1;
    debug_assert!(e1.weight() <= max_flips && e2.weight() <= max_flips);

    let attack_with = |e: Word| -> LinearAttack {
        let channel = Channel::constant(ErrorDistribution::point_mass(e));
        let avg = average_error(cb, &channel);
        LinearAttack {
            channel,
            error: e,
            average_error: avg,
        }
    };
    let first = attack_with(e1);
    if first.average_error >= 0.5 {
        return Ok(first);
    }
    let second = attack_with(e2);
    if second.average_error >= first.average_error {
        Ok(second)
    } else {
        Ok(first)
    }
}

/// Output of [`matching_expurgation`].
#[derive(Debug, Clone)]
pub struct ExpurgationResult {
    /// Matched index pairs `(i, j)` with `i < j`, in greedy scan order.
    pub matching: Vec<(usize, usize)>,
    /// Indices untouched by the matching, in increasing order. Maximality
    /// of the matching makes their pairwise distances exceed `2 floor(p*n)`.
    pub independent_set: Vec<usize>,
    /// Codewords at the independent-set indices; `None` when every index
    /// was matched.
    pub subcode: Option<Codebook>,
    /// The p-channel that crushes each matched pair onto the midpoint of
    /// the pair and leaves everything else untouched.
    pub channel: Channel,
}

/// Builds a maximal matching on the graph whose edges join codewords at
/// distance at most `2 floor(p*n)` (edges scanned in `(i, j)` lexicographic
/// order), removes matched indices, and constructs the pair-crushing
/// channel.
///
/// For a matched pair at distance `d`, the received word for both inputs is
/// the pair midpoint: the lower-index word with its `ceil(d/2)` lowest-index
/// differing positions flipped toward its partner. The two point-mass errors
/// then have weights `ceil(d/2)` and `floor(d/2)`, both at most
/// `floor(p*n)`. When one word appears at several matched indices, the
/// first pair in matching order fixes its error (the channel maps input
/// words, not indices). Unmatched inputs see the zero error.
pub fn matching_expurgation(cb: &Codebook, p: f64) -> ExpurgationResult {
    let n = cb.n();
    let num = cb.num_words();
    let threshold = 2 * floor_pn(p, n);

    let mut taken = alloc::vec![false; num];
    let mut matching = Vec::new();
    for i in 0..num {
        if taken[i] {
            continue;
        }
        for j in (i + 1)..num {
            if taken[j] {
                continue;
            }
            if cb.word(i).distance(cb.word(j)) <= threshold {
                taken[i] = true;
                taken[j] = true;
                matching.push((i, j));
                break;
            }
        }
    }
    let independent_set: Vec<usize> = (0..num).filter(|&i| !taken[i]).collect();
    let subcode = if independent_set.is_empty() {
        None
    } else {
        Some(Codebook::explicit(
            n,
            independent_set.iter().map(|&i| cb.word(i)).collect(),
        ))
    };

    // Channel: family slot 0 is the zero error; matched words get the
    // point mass mapping them onto their pair midpoint.
    let mut family = alloc::vec![ErrorDistribution::point_mass(Word::zero(n))];
    let mut index_of_error: BTreeMap<u64, usize> = BTreeMap::new();
    index_of_error.insert(0, 0);
    let mut assign: BTreeMap<Word, usize> = BTreeMap::new();
    for &(i, j) in &matching {
        let a = cb.word(i);
        let b = cb.word(j);
        let diff = a ^ b;
        let d = diff.weight();
        let mut head = Word::zero(n);
        for (taken_bits, pos) in diff.support().enumerate() {
            if (taken_bits as u32) < d.div_ceil(2) {
                head = head.with_flipped(pos);
            }
        }
        let midpoint = a ^ head;
        for (input, err) in [(a, midpoint ^ a), (b, midpoint ^ b)] {
            if assign.contains_key(&input) {
                continue; // first matched pair owns this word
            }
            let slot = *index_of_error.entry(err.bits()).or_insert_with(|| {
                family.push(ErrorDistribution::point_mass(err));
                family.len() - 1
            });
            assign.insert(input, slot);
        }
    }
    let channel = Channel::new(n, family, assign, 0).expect("expurgation channel is valid");
    ExpurgationResult {
        matching,
        independent_set,
        subcode,
        channel,
    }
}

/// How [`greedy_oblivious_adversary`] picks its candidate error pool.
#[derive(Debug, Clone, Copy)]
pub enum CandidateMode {
    /// Every error in `B(floor(p*n), 0)`; errors if the ball volume exceeds
    /// the budget.
    Exhaustive { max_candidates: u64 },
    /// `count` errors drawn uniformly from the ball via the seeded stream.
    Sampled { count: u64, seed: u64 },
}

/// Outcome of [`greedy_oblivious_adversary`].
#[derive(Debug, Clone)]
pub struct AdversaryOutcome {
    pub channel: Channel,
    /// Selected errors in selection order.
    pub selected: Vec<Word>,
    /// Size of the union of decode-failure sets over the selected errors.
    pub covered: usize,
    /// Candidate pool size examined.
    pub candidates: u64,
}

/// Greedy coverage-maximizing adversary with a family budget of `k_budget`
/// distributions.
///
/// For each candidate error `e` the failure set `D_e` collects the messages
/// that nearest-neighbor decoding actually loses (not the disturbed-set
/// over-approximation). Up to `k_budget - 1` errors are selected greedily by
/// marginal coverage (ties to the earliest candidate); one family slot is
/// always reserved for the zero error so uncovered inputs have a defined
/// assignment. Each covered codeword is assigned the first selected error
/// that covers it. The achieved average error is `covered / N` plus
/// whatever the zero error already loses to duplicate codewords.
pub fn greedy_oblivious_adversary(
    cb: &Codebook,
    p: f64,
    k_budget: usize,
    mode: CandidateMode,
) -> Result<AdversaryOutcome> {
    assert!(k_budget >= 1, "family budget must be at least 1");
    let n = cb.n();
    let num = cb.num_words();
    let radius = floor_pn(p, n);

    let candidates: Vec<Word> = match mode {
        CandidateMode::Exhaustive { max_candidates } => {
            let vol = ball_volume(n, radius);
            if vol > max_candidates as u128 {
                return Err(Error::BudgetExceeded {
                    required: vol,
                    budget: max_candidates as u128,
                });
            }
            Word::zero(n).ball(radius).collect()
        }
        CandidateMode::Sampled { count, seed } => {
            let vol = ball_volume(n, radius);
            let mut rng = SplitMix64::new(seed);
            (0..count)
                .map(|_| ball_word_at(n, radius, rng.below_u128(vol)))
                .collect()
        }
    };

    // Failure sets as index bitmaps.
    let blocks = num.div_ceil(64);
    let failure_sets: Vec<Vec<u64>> = candidates
        .iter()
        .map(|&e| {
            let mut set = alloc::vec![0u64; blocks];
            for i in 0..num {
                if decode(cb, cb.word(i) ^ e).index != i {
                    set[i / 64] |= 1u64 << (i % 64);
                }
            }
            set
        })
        .collect();

    let mut covered = alloc::vec![0u64; blocks];
    let mut selected: Vec<usize> = Vec::new();
    for _ in 0..k_budget.saturating_sub(1) {
        let mut best: Option<(usize, u32)> = None;
        for (c, set) in failure_sets.iter().enumerate() {
            if selected.contains(&c) {
                continue;
            }
            let gain: u32 = set
                .iter()
                .zip(covered.iter())
                .map(|(s, d)| (s & !d).count_ones())
                .sum();
            if gain > 0 && best.is_none_or(|(_, g)| gain > g) {
                best = Some((c, gain));
            }
        }
        match best {
            Some((c, _)) => {
                for (d, s) in covered.iter_mut().zip(failure_sets[c].iter()) {
                    *d |= s;
                }
                selected.push(c);
            }
            None => break,
        }
    }
    let covered_count = covered.iter().map(|b| b.count_ones() as usize).sum();

    // Family: zero error first, then the selected errors (skipping a
    // selected zero, which slot 0 already carries).
    let zero = Word::zero(n);
    let mut family = alloc::vec![ErrorDistribution::point_mass(zero)];
    let mut slot_of_candidate: Vec<usize> = Vec::with_capacity(selected.len());
    for &c in &selected {
        if candidates[c] == zero {
            slot_of_candidate.push(0);
        } else {
            family.push(ErrorDistribution::point_mass(candidates[c]));
            slot_of_candidate.push(family.len() - 1);
        }
    }
    let mut assign: BTreeMap<Word, usize> = BTreeMap::new();
    for (pick, &c) in selected.iter().enumerate() {
        let set = &failure_sets[c];
        for i in 0..num {
            if set[i / 64] >> (i % 64) & 1 == 1 {
                assign.entry(cb.word(i)).or_insert(slot_of_candidate[pick]);
            }
        }
    }
    let channel = Channel::new(n, family, assign, 0).expect("adversary channel is valid");
    Ok(AdversaryOutcome {
        channel,
        selected: selected.iter().map(|&c| candidates[c]).collect(),
        covered: covered_count,
        candidates: candidates.len() as u64,
    })
}

/// The `rank`-th word of `B(radius, 0)` in the canonical (weight, then
/// lexicographic) enumeration order.
pub fn ball_word_at(n: u32, radius: u32, mut rank: u128) -> Word {
    let mut weight = 0u32;
    loop {
        let class = crate::math::binomial(n, weight);
        if rank < class {
            break;
        }
        rank -= class;
        weight += 1;
        assert!(weight <= radius, "rank exceeds ball volume");
    }
    // Combinadic unranking in increasing numeric order: decide the highest
    // machine bit first.
    let mut bits = 0u64;
    let mut need = weight;
    for b in (0..n).rev() {
        if need == 0 {
            break;
        }
        let below = crate::math::binomial(b, need);
        if rank >= below {
            bits |= 1u64 << b;
            rank -= below;
            need -= 1;
        }
    }
    Word::new(n, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::max_error;
    use crate::rng::derive_seed;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn hamming74() -> Codebook {
        let rows = [w("1000110"), w("0100101"), w("0010011"), w("0001111")];
        Codebook::from_generator_matrix(7, &rows)
    }

    #[test]
    fn attack_on_two_word_repetition_code() {
        let cb = Codebook::from_generator_matrix(2, &[w("11")]);
        let attack = linear_code_attack(&cb, 0.75).unwrap();
        assert!(attack.average_error >= 0.5);
        assert!(attack.channel.is_p_channel(0.75));
        assert_eq!(attack.channel.family_size(), 1);
        assert_eq!(attack.error, w("10"));
    }

    #[test]
    fn attack_on_hamming_code_with_two_flips() {
        let cb = hamming74();
        // floor(p*n) = 2 so 2 floor(p*n) = 4 >= 3 = min distance.
        let p = 2.5 / 7.0;
        let attack = linear_code_attack(&cb, p).unwrap();
        assert!(attack.average_error >= 0.5);
        assert!(attack.channel.is_p_channel(p));
        assert_eq!(attack.channel.obliviousness(), 1.0);
    }

    #[test]
    fn attack_requires_small_minimum_distance() {
        let cb = hamming74();
        // floor(p*n) = 1 gives 2 < 3 = min distance: infeasible.
        let err = linear_code_attack(&cb, 1.5 / 7.0);
        assert!(matches!(err, Err(Error::AttackInfeasible { .. })));
        let explicit = Codebook::explicit(3, alloc::vec![w("000"), w("111")]);
        assert!(matches!(
            linear_code_attack(&explicit, 0.4),
            Err(Error::NotLinear)
        ));
    }

    #[test]
    fn attack_split_weights_are_admissible() {
        let cb = Codebook::from_generator_matrix(6, &[w("111110")]);
        // v = 5, floor(p*n) = 3: e1 has weight 3, e2 weight 2.
        let attack = linear_code_attack(&cb, 0.5).unwrap();
        assert!(attack.error.weight() <= 3);
        assert!(attack.average_error >= 0.5);
    }

    #[test]
    fn expurgation_of_wide_code_is_identity() {
        let cb = Codebook::explicit(6, alloc::vec![w("000000"), w("111111")]);
        let res = matching_expurgation(&cb, 0.2); // threshold 2
        assert!(res.matching.is_empty());
        assert_eq!(res.independent_set, alloc::vec![0, 1]);
        assert_eq!(res.subcode.as_ref().unwrap().words(), cb.words());
        assert_eq!(res.channel.family_size(), 1);
        assert_eq!(average_error(&cb, &res.channel), 0.0);
    }

    #[test]
    fn expurgation_worked_example() {
        let cb = Codebook::explicit(4, alloc::vec![w("0000"), w("1000"), w("1111")]);
        let res = matching_expurgation(&cb, 0.25); // floor(p*n) = 1, threshold 2
        assert_eq!(res.matching, alloc::vec![(0, 1)]);
        assert_eq!(res.independent_set, alloc::vec![2]);
        assert_eq!(res.subcode.as_ref().unwrap().words(), &[w("1111")]);
        assert!(res.channel.is_p_channel(0.25));
        // Midpoint of 0000 and 1000 at distance 1: flip the differing
        // position of the lower-index word, so both inputs receive 1000.
        assert_eq!(
            res.channel.distribution_for(w("0000")).support()[0].0,
            w("1000")
        );
        assert_eq!(
            res.channel.distribution_for(w("1000")).support()[0].0,
            Word::zero(4)
        );
    }

    #[test]
    fn expurgation_invariants_on_random_codebooks() {
        for trial in 0..60u64 {
            let cb = Codebook::sample_random(10, 14, derive_seed(900, trial));
            let p = [0.1, 0.2, 0.3][trial as usize % 3];
            let t = floor_pn(p, 10);
            let res = matching_expurgation(&cb, p);
            assert!(res.channel.is_p_channel(p));
            if let Some(sub) = &res.subcode {
                if sub.num_words() >= 2 {
                    assert!(sub.min_distance().unwrap() > 2 * t);
                }
            }
            let avg = average_error(&cb, &res.channel);
            let lower = (1.0 - 2.0 * avg) * cb.num_words() as f64;
            assert!(
                res.independent_set.len() as f64 >= lower - 1e-9,
                "independent set too small: {} < {lower}",
                res.independent_set.len()
            );
        }
    }

    #[test]
    fn greedy_trivial_cases() {
        let single = Codebook::explicit(4, alloc::vec![w("0110")]);
        let out = greedy_oblivious_adversary(
            &single,
            0.25,
            3,
            CandidateMode::Exhaustive { max_candidates: 64 },
        )
        .unwrap();
        assert_eq!(out.covered, 0);
        assert!(out.selected.is_empty());
        assert_eq!(average_error(&single, &out.channel), 0.0);
    }

    #[test]
    fn greedy_exhausts_when_budget_allows() {
        let cb = Codebook::sample_random(6, 8, 42);
        let radius = 1u32;
        // Union of all failure sets.
        let mut all = alloc::collections::BTreeSet::new();
        for e in Word::zero(6).ball(radius) {
            for i in 0..cb.num_words() {
                if decode(&cb, cb.word(i) ^ e).index != i {
                    all.insert(i);
                }
            }
        }
        let out = greedy_oblivious_adversary(
            &cb,
            1.0 / 6.0,
            64,
            CandidateMode::Exhaustive { max_candidates: 64 },
        )
        .unwrap();
        assert_eq!(out.covered, all.len());
    }

    /// Resamples until all codewords are distinct; the coverage identity
    /// below needs a word-level channel to act injectively on messages.
    fn sample_distinct(n: u32, num_words: usize, seed: u64) -> Codebook {
        let mut bump = 0u64;
        loop {
            let cb = Codebook::sample_random(n, num_words, derive_seed(seed, bump));
            let set: alloc::collections::BTreeSet<u64> =
                cb.words().iter().map(|x| x.bits()).collect();
            if set.len() == num_words {
                return cb;
            }
            bump += 1;
        }
    }

    #[test]
    fn greedy_channel_achieves_its_coverage() {
        for trial in 0..30u64 {
            let cb = sample_distinct(8, 10, derive_seed(901, trial));
            let out = greedy_oblivious_adversary(
                &cb,
                0.25,
                3,
                CandidateMode::Exhaustive {
                    max_candidates: 256,
                },
            )
            .unwrap();
            let avg = average_error(&cb, &out.channel);
            let expected = out.covered as f64 / cb.num_words() as f64;
            assert!(
                (avg - expected).abs() <= 1e-12,
                "channel error {avg} differs from coverage {expected}"
            );
            assert!(out.channel.family_size() <= 3);
            assert!(out.channel.is_p_channel(0.25));
            let _ = max_error(&cb, &out.channel);
        }
    }

    #[test]
    fn greedy_matches_brute_force_on_small_instances() {
        // <= 12 candidates, budget K <= 4: greedy >= (1 - 1/e) * optimum.
        let factor = 1.0 - core::f64::consts::E.recip();
        for trial in 0..40u64 {
            let cb = Codebook::sample_random(7, 9, derive_seed(902, trial));
            let radius = 1u32; // 8 candidates
            let k = 2 + (trial % 3) as usize; // K in 2..=4
            let candidates: Vec<Word> = Word::zero(7).ball(radius).collect();
            assert!(candidates.len() <= 12);
            let sets: Vec<alloc::collections::BTreeSet<usize>> = candidates
                .iter()
                .map(|&e| {
                    (0..cb.num_words())
                        .filter(|&i| decode(&cb, cb.word(i) ^ e).index != i)
                        .collect()
                })
                .collect();
            // Exhaustive optimum over all subsets of size <= k - 1.
            let mut best = 0usize;
            let m = candidates.len();
            for mask in 0u32..(1 << m) {
                if mask.count_ones() as usize > k - 1 {
                    continue;
                }
                let mut union = alloc::collections::BTreeSet::new();
                for (c, set) in sets.iter().enumerate() {
                    if mask >> c & 1 == 1 {
                        union.extend(set.iter().copied());
                    }
                }
                best = best.max(union.len());
            }
            let out = greedy_oblivious_adversary(
                &cb,
                1.5 / 7.0,
                k,
                CandidateMode::Exhaustive { max_candidates: 64 },
            )
            .unwrap();
            assert!(
                out.covered as f64 >= factor * best as f64 - 1e-9,
                "greedy {} vs optimum {best}",
                out.covered
            );
        }
    }

    #[test]
    fn sampled_candidates_come_from_the_ball() {
        let cb = Codebook::sample_random(12, 10, 7);
        let out =
            greedy_oblivious_adversary(&cb, 0.25, 4, CandidateMode::Sampled { count: 50, seed: 3 })
                .unwrap();
        assert!(out.channel.is_p_channel(0.25));
        assert_eq!(out.candidates, 50);
    }

    #[test]
    fn ball_unranking_matches_enumeration_order() {
        for (n, r) in [(6u32, 3u32), (5, 5), (9, 2)] {
            let words: Vec<Word> = Word::zero(n).ball(r).collect();
            for (rank, &expect) in words.iter().enumerate() {
                assert_eq!(ball_word_at(n, r, rank as u128), expect, "rank {rank}");
            }
        }
    }
}
