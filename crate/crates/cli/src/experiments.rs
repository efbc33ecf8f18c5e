//! The experiment implementations behind each CLI subcommand.
//!
//! Every experiment resolves its parameters from an [`ExperimentConfig`],
//! fans integer-valued work units out through [`par_map`], reduces serially
//! in index order, and packages measured quantities next to the bounds they
//! are judged against in an [`ExperimentRecord`].

use std::path::Path;

use serde_json::json;

use oblivch_core::adversary::ball_word_at;
use oblivch_core::codebook::DEFAULT_CENTER_BUDGET;
use oblivch_core::disturbance::ConcentrationStats;
use oblivch_core::mutual_info::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use oblivch_core::{
    average_error, ball_volume, bound_point, decode, derive_seed, designated_error_channel,
    disturbed_set, entropy, floor_pn, greedy_oblivious_adversary, gv_advantage_region,
    lemma22_threshold, lemma31_bound, linear_code_attack, listdec_params, matching_expurgation,
    max_mutual_information, vu_tail_bound, CandidateMode, Channel, Codebook, ErrorDistribution,
    ExpurgationResult, ListDecodeMode, Word,
};

use crate::config::ExperimentConfig;
use crate::record::{ExperimentRecord, RecordBuilder};
use crate::runner::par_map;
use crate::{formats, CliError, CliResult};

const FP_SLACK: f64 = 1e-12;

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_word(s: &str) -> CliResult<Word> {
    s.parse::<Word>().map_err(CliError::Core)
}

/// Codebook from `code_file`, inline generator rows, or seeded sampling.
fn codebook_from_config(cfg: &ExperimentConfig) -> CliResult<Codebook> {
    if let Some(path) = &cfg.code_file {
        return formats::read_codebook(Path::new(path));
    }
    if cfg.rows.is_some() || cfg.generator_file.is_some() {
        let (n, rows) = generator_from_config(cfg)?;
        return Ok(Codebook::from_generator_matrix(n, &rows));
    }
    let n = cfg.require_n()?;
    let num_words = cfg.resolve_num_words(n)?;
    Ok(Codebook::sample_random(n, num_words, cfg.seed()))
}

fn generator_from_config(cfg: &ExperimentConfig) -> CliResult<(u32, Vec<Word>)> {
    let rows: Vec<Word> = if let Some(rows) = &cfg.rows {
        rows.iter()
            .map(|s| parse_word(s))
            .collect::<CliResult<_>>()?
    } else if let Some(path) = &cfg.generator_file {
        formats::read_rows(Path::new(path))?
    } else {
        return Err(config_err(
            "missing generator rows (`rows` or `generator_file`)",
        ));
    };
    let n = match cfg.n {
        Some(n) => n,
        None => rows
            .first()
            .map(|w| w.len())
            .ok_or_else(|| config_err("empty generator needs `n`"))?,
    };
    Ok((n, rows))
}

fn ball_errors(n: u32, radius: u32, budget: u64) -> CliResult<Vec<Word>> {
    let vol = ball_volume(n, radius);
    if vol > budget as u128 {
        return Err(CliError::Core(oblivch_core::Error::BudgetExceeded {
            required: vol,
            budget: budget as u128,
        }));
    }
    Ok(Word::zero(n).ball(radius).collect())
}

/// Per-error disturbed-set sizes, in ball enumeration order.
fn disturbed_sizes(cb: &Codebook, errors: &[Word]) -> Vec<usize> {
    par_map(errors.len() as u64, |i| {
        oblivch_core::disturbance::disturbed_size(cb, errors[i as usize])
    })
}

/// Per-error true decode-failure counts, in ball enumeration order.
fn failure_counts(cb: &Codebook, errors: &[Word]) -> Vec<usize> {
    par_map(errors.len() as u64, |i| {
        let e = errors[i as usize];
        (0..cb.num_words())
            .filter(|&m| decode(cb, cb.word(m) ^ e).index != m)
            .count()
    })
}

fn argmax_first(values: &[usize]) -> (usize, usize) {
    let mut best = 0usize;
    let mut at = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            at = i;
        }
    }
    (best, at)
}

/// Family budget `round(2^{(1-gamma) n})`, at least 1.
fn family_budget(n: u32, gamma: f64) -> CliResult<usize> {
    let raw = f64::round(f64::exp2((1.0 - gamma) * n as f64));
    if raw > (1u64 << 31) as f64 {
        return Err(config_err(format!(
            "family budget 2^((1-gamma)n) = {raw} is too large to enumerate"
        )));
    }
    Ok((raw as usize).max(1))
}

/// Mean of `|A_e|` over sampled codebooks against its closed form and the
/// expected-disturbance bound.
pub fn run_lemma31(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let n = cfg.require_n()?;
    let num_words = cfg.resolve_num_words(n)?;
    let w = cfg
        .error_weight
        .ok_or_else(|| config_err("missing required parameter `error_weight`"))?;
    if w > n {
        return Err(config_err("error_weight exceeds n"));
    }
    let trials = cfg.trials.unwrap_or(2000).max(1);
    let seed = cfg.seed();

    let sizes: Vec<usize> = par_map(trials, |t| {
        oblivch_core::disturbance::sample_disturbed_size(n, num_words, w, derive_seed(seed, t))
    });
    let stats = ConcentrationStats::from_samples(n, num_words, w, seed, &sizes);
    let sigma_mean = stats.sample_std / f64::sqrt(trials as f64);
    let rate_eff = f64::log2(num_words as f64) / n as f64;
    let bound = lemma31_bound(n, rate_eff, w as f64 / n as f64);

    let mut rec = RecordBuilder::new("lemma31", cfg)?;
    rec.stats(json!({
        "num_words": num_words,
        "error_weight": w,
        "error_word": oblivch_core::prefix_error_word(n, w).to_string(),
        "trials": trials,
        "empirical_mean": stats.empirical_mean,
        "empirical_max": stats.empirical_max,
        "sample_std": stats.sample_std,
        "exact_mean": stats.exact_mean,
        "rate_effective": rate_eff,
    }));
    rec.bounds(json!({
        "lemma31_bound": bound,
        "four_sigma_of_mean": 4.0 * sigma_mean,
    }));
    let dev = (stats.empirical_mean - stats.exact_mean).abs();
    rec.verdict(
        "empirical_mean_within_4_sigma_of_exact",
        dev,
        4.0 * sigma_mean,
        dev <= 4.0 * sigma_mean + FP_SLACK,
    );
    if 2 * w <= n {
        rec.verdict(
            "exact_expectation_below_lemma31_bound",
            stats.exact_mean,
            bound,
            stats.exact_mean <= bound * (1.0 + FP_SLACK),
        );
    } else {
        rec.verdict_note(
            "exact_expectation_below_lemma31_bound",
            stats.exact_mean,
            bound,
            true,
            "error weight exceeds n/2; the entropy ball bound does not apply",
        );
    }
    Ok(rec.finish())
}

/// Tail of `|A_e| - E[|A_e|]` over sampled codebooks against the
/// expected-disturbance threshold and the Monte Carlo resolution floor.
pub fn run_concentration(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let n = cfg.require_n()?;
    let p = cfg.require_p_below_half()?;
    let gamma = cfg.require_gamma()?;
    let delta = cfg.delta.ok_or_else(|| config_err("missing `delta`"))?;
    let trials = cfg.trials.unwrap_or(10_000).max(1);
    let seed = cfg.seed();

    let h = entropy(p);
    let rate_cfg = gamma - h - delta;
    if rate_cfg <= 0.0 {
        return Err(config_err(format!(
            "configured rate gamma - H(p) - delta = {rate_cfg} is not positive"
        )));
    }
    let num_words = f64::floor(f64::exp2(rate_cfg * n as f64) + 1e-9) as usize;
    if num_words < 1 {
        return Err(config_err("configured rate yields an empty codebook"));
    }
    let w = floor_pn(p, n);

    let sizes: Vec<usize> = par_map(trials, |t| {
        oblivch_core::disturbance::sample_disturbed_size(n, num_words, w, derive_seed(seed, t))
    });
    let stats = ConcentrationStats::from_samples(n, num_words, w, seed, &sizes);

    let two_pow_neg2n = f64::exp2(-2.0 * n as f64);
    let mc_floor = 10.0 / trials as f64;
    let floor_bound = two_pow_neg2n.max(mc_floor);
    let lambda = (n as f64) * (n as f64);
    let ell = 12 * (n as u64) * (n as u64);
    let vu = oblivch_core::bounds::vu_tail_terms(n, num_words as u64, ell, lambda);
    let vu_applicable = lambda <= 4.0 * num_words as f64;

    let mut rec = RecordBuilder::new("concentration", cfg)?;
    rec.stats(json!({
        "num_words": num_words,
        "error_weight": w,
        "error_word": oblivch_core::prefix_error_word(n, w).to_string(),
        "trials": trials,
        "empirical_mean": stats.empirical_mean,
        "empirical_max": stats.empirical_max,
        "exact_mean": stats.exact_mean,
        "tail_frequency": stats.tail_frequency,
        "rate_config": rate_cfg,
        "rate_effective": f64::log2(num_words as f64) / n as f64,
    }));
    rec.bounds(json!({
        "deviation_threshold": stats.deviation_threshold,
        "lemma31_bound_at_config_rate": lemma31_bound(n, rate_cfg, p),
        "two_pow_minus_2n": two_pow_neg2n,
        "monte_carlo_floor": mc_floor,
        "vu_tail_bound": vu.tail_bound,
        "vu_tail_bound_log2": vu.tail_bound_log2,
        "vu_deviation": vu.deviation,
        "vu_lambda": lambda,
        "vu_applicable": vu_applicable,
    }));
    rec.verdict(
        "tail_frequency_within_resolution_floor",
        stats.tail_frequency,
        floor_bound,
        stats.tail_frequency <= floor_bound + FP_SLACK,
    );
    if let Some(path) = &cfg.csv_out {
        let csv = format!(
            "{}\n{}\n",
            ConcentrationStats::csv_header(),
            stats.csv_row()
        );
        std::fs::write(path, csv)?;
    }
    Ok(rec.finish())
}

/// Exhaustive error sweep of `max_e |A_e|` against the communication
/// threshold; when the threshold holds, constructed adversaries must stay
/// within epsilon.
pub fn run_lemma22(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let cb = codebook_from_config(cfg)?;
    let n = cb.n();
    let p = cfg.require_p()?;
    let gamma = cfg.require_gamma()?;
    let epsilon = cfg.epsilon.ok_or_else(|| config_err("missing `epsilon`"))?;
    let budget = cfg.budget.unwrap_or(DEFAULT_CENTER_BUDGET);

    let w = floor_pn(p, n);
    let errors = ball_errors(n, w, budget)?;
    let sizes = disturbed_sizes(&cb, &errors);
    let (max_disturbed, at) = argmax_first(&sizes);
    let rate_eff = cb.rate();
    let threshold = lemma22_threshold(n, rate_eff, gamma, epsilon);
    let condition = (max_disturbed as f64) <= threshold + FP_SLACK;

    let mut rec = RecordBuilder::new("lemma22", cfg)?;
    let mut stats = json!({
        "num_words": cb.num_words(),
        "error_weight": w,
        "ball_volume": errors.len(),
        "max_disturbed": max_disturbed,
        "worst_error": errors[at].to_string(),
        "rate_effective": rate_eff,
    });
    rec.verdict(
        "max_disturbed_within_threshold",
        max_disturbed as f64,
        threshold,
        condition,
    );
    if condition {
        let k = family_budget(n, gamma)?;
        let greedy = greedy_oblivious_adversary(
            &cb,
            p,
            k,
            CandidateMode::Exhaustive {
                max_candidates: budget,
            },
        )?;
        let greedy_err = average_error(&cb, &greedy.channel);
        rec.verdict(
            "greedy_adversary_error_within_epsilon",
            greedy_err,
            epsilon,
            greedy_err <= epsilon + FP_SLACK,
        );
        let fails = failure_counts(&cb, &errors);
        let (best_fail, best_at) = argmax_first(&fails);
        let single = Channel::constant(ErrorDistribution::point_mass(errors[best_at]));
        let single_err = average_error(&cb, &single);
        rec.verdict(
            "best_single_error_within_epsilon",
            single_err,
            epsilon,
            single_err <= epsilon + FP_SLACK,
        );
        let obj = stats.as_object_mut().unwrap();
        obj.insert("family_budget".into(), json!(k));
        obj.insert(
            "greedy_selected".into(),
            json!(greedy
                .selected
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()),
        );
        obj.insert("greedy_covered".into(), json!(greedy.covered));
        obj.insert("greedy_error".into(), json!(greedy_err));
        obj.insert(
            "best_single_error".into(),
            json!(errors[best_at].to_string()),
        );
        obj.insert("best_single_failures".into(), json!(best_fail));
        obj.insert("best_single_error_rate".into(), json!(single_err));
    }
    rec.stats(stats);
    rec.bounds(json!({
        "lemma22_threshold": threshold,
        "epsilon": epsilon,
    }));
    Ok(rec.finish())
}

/// Samples codebooks at the configured rate until one keeps every
/// disturbed set below twice the expected-size bound, then attacks it.
pub fn run_theorem1(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let n = cfg.require_n()?;
    let p = cfg.require_p_below_half()?;
    let gamma = cfg.require_gamma()?;
    let delta = cfg.delta.ok_or_else(|| config_err("missing `delta`"))?;
    let retries = cfg.retries.unwrap_or(10).max(1);
    let seed = cfg.seed();
    let budget = cfg.budget.unwrap_or(DEFAULT_CENTER_BUDGET);

    oblivch_core::theorem1_rate(p, gamma)?; // gamma must clear the floor
    let h = entropy(p);
    let rate_cfg = gamma - h - delta;
    if rate_cfg <= 0.0 {
        return Err(config_err("gamma - H(p) - delta must be positive"));
    }
    let num_words = f64::floor(f64::exp2(rate_cfg * n as f64) + 1e-9) as usize;
    if num_words < 1 {
        return Err(config_err("configured rate yields an empty codebook"));
    }
    let w = floor_pn(p, n);
    let errors = ball_errors(n, w, budget)?;
    // Twice the expected-size bound at the configured rate: the sweep
    // condition whose failure probability the union bound controls.
    let sweep_threshold = f64::exp2((h + 2.0 * rate_cfg - 1.0) * n as f64 + 1.0);

    let mut pass_flags = Vec::with_capacity(retries as usize);
    let mut worst_sizes = Vec::with_capacity(retries as usize);
    for attempt in 0..retries as u64 {
        let cb = Codebook::sample_random(n, num_words, derive_seed(seed, attempt));
        let sizes = disturbed_sizes(&cb, &errors);
        let (max_disturbed, _) = argmax_first(&sizes);
        worst_sizes.push(max_disturbed);
        pass_flags.push((max_disturbed as f64) <= sweep_threshold + FP_SLACK);
    }
    let pass_count = pass_flags.iter().filter(|&&b| b).count();
    let first_pass = pass_flags.iter().position(|&b| b);
    let rate_eff = f64::log2(num_words as f64) / n as f64;
    let rate_floor = gamma - h - delta - 1.0 / n as f64;
    let epsilon_implied = f64::exp2(1.0 - delta * n as f64);

    let mut rec = RecordBuilder::new("theorem1", cfg)?;
    let mut stats = json!({
        "num_words": num_words,
        "error_weight": w,
        "retries": retries,
        "pass_count": pass_count,
        "pass_fraction": pass_count as f64 / retries as f64,
        "worst_disturbed_per_attempt": worst_sizes,
        "rate_config": rate_cfg,
        "rate_effective": rate_eff,
        "epsilon_implied": epsilon_implied,
    });
    rec.bounds(json!({
        "sweep_threshold": sweep_threshold,
        "rate_floor_with_rounding": rate_floor,
        "epsilon_implied": epsilon_implied,
    }));
    match first_pass {
        Some(idx) => {
            rec.verdict(
                "passing_codebook_found",
                (idx + 1) as f64,
                retries as f64,
                true,
            );
            rec.verdict(
                "achieved_rate_at_least_floor",
                rate_eff,
                rate_floor,
                rate_eff >= rate_floor - FP_SLACK,
            );
            let cb = Codebook::sample_random(n, num_words, derive_seed(seed, idx as u64));
            let k = family_budget(n, gamma)?;
            let greedy = greedy_oblivious_adversary(
                &cb,
                p,
                k,
                CandidateMode::Exhaustive {
                    max_candidates: budget,
                },
            )?;
            let greedy_err = average_error(&cb, &greedy.channel);
            let fails = failure_counts(&cb, &errors);
            let (_, best_at) = argmax_first(&fails);
            let single = Channel::constant(ErrorDistribution::point_mass(errors[best_at]));
            let single_err = average_error(&cb, &single);
            let vacuous = epsilon_implied >= 1.0;
            let note = "implied epsilon 2^(1 - delta n) is at least 1 at this block length";
            for (name, err) in [
                ("greedy_adversary_error_within_implied_epsilon", greedy_err),
                ("best_single_error_within_implied_epsilon", single_err),
            ] {
                if vacuous {
                    rec.verdict_note(
                        name,
                        err,
                        epsilon_implied,
                        err <= epsilon_implied + FP_SLACK,
                        note,
                    );
                } else {
                    rec.verdict(
                        name,
                        err,
                        epsilon_implied,
                        err <= epsilon_implied + FP_SLACK,
                    );
                }
            }
            let obj = stats.as_object_mut().unwrap();
            obj.insert("selected_attempt".into(), json!(idx));
            obj.insert("family_budget".into(), json!(k));
            obj.insert("greedy_error".into(), json!(greedy_err));
            obj.insert("greedy_covered".into(), json!(greedy.covered));
            obj.insert(
                "best_single_error".into(),
                json!(errors[best_at].to_string()),
            );
            obj.insert("best_single_error_rate".into(), json!(single_err));
        }
        None => {
            rec.verdict_note(
                "passing_codebook_found",
                retries as f64,
                retries as f64,
                false,
                "no sampled codebook met the sweep threshold; expected only for small n",
            );
        }
    }
    rec.stats(stats);
    Ok(rec.finish())
}

/// Matching-based expurgation: subcode distance and the independent-set
/// size bound under the constructed pair-crushing channel.
pub fn run_expurgate(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let cb = codebook_from_config(cfg)?;
    let p = cfg.require_p()?;
    let n = cb.n();
    let w = floor_pn(p, n);
    let res: ExpurgationResult = matching_expurgation(&cb, p);
    let avg = average_error(&cb, &res.channel);
    let set_size = res.independent_set.len();
    let coverage_bound = (1.0 - 2.0 * avg) * cb.num_words() as f64;

    let mut rec = RecordBuilder::new("expurgate", cfg)?;
    let subcode_min_distance = match &res.subcode {
        Some(sub) if sub.num_words() >= 2 => Some(sub.min_distance().expect("N >= 2")),
        _ => None,
    };
    rec.stats(json!({
        "num_words": cb.num_words(),
        "matched_pairs": res.matching.len(),
        "independent_set_size": set_size,
        "average_error": avg,
        "subcode_min_distance": subcode_min_distance,
        "max_flips": w,
    }));
    rec.bounds(json!({
        "required_subcode_distance": 2 * w + 1,
        "independent_set_lower_bound": coverage_bound,
    }));
    match subcode_min_distance {
        Some(d) => rec.verdict(
            "subcode_min_distance_exceeds_2pn",
            d as f64,
            (2 * w + 1) as f64,
            d > 2 * w,
        ),
        None => rec.verdict_note(
            "subcode_min_distance_exceeds_2pn",
            (n + 1) as f64,
            (2 * w + 1) as f64,
            true,
            "independent set has fewer than two words; distance is vacuous",
        ),
    };
    rec.verdict(
        "independent_set_at_least_coverage_bound",
        set_size as f64,
        coverage_bound,
        set_size as f64 >= coverage_bound - 1e-9,
    );
    rec.verdict(
        "channel_is_p_channel",
        res.channel.max_support_weight() as f64,
        w as f64,
        res.channel.max_support_weight() <= w,
    );
    if let Some(path) = &cfg.subcode_out {
        if let Some(sub) = &res.subcode {
            formats::write_codebook(Path::new(path), sub)?;
        }
    }
    if let Some(path) = &cfg.channel_out {
        formats::write_channel(Path::new(path), &res.channel)?;
    }
    Ok(rec.finish())
}

/// Shifting attack on a linear code: the returned constant channel must
/// reach average error 1/2 within the flip budget.
pub fn run_attack_linear(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let (n, rows) = generator_from_config(cfg)?;
    let cb = Codebook::from_generator_matrix(n, &rows);
    let p = cfg.require_p()?;
    let w = floor_pn(p, n);
    let attack = linear_code_attack(&cb, p)?;

    let mut rec = RecordBuilder::new("attack-linear", cfg)?;
    rec.stats(json!({
        "num_words": cb.num_words(),
        "generator_rows": rows.len(),
        "min_distance": cb.min_distance().ok(),
        "attack_error_word": attack.error.to_string(),
        "average_error": attack.average_error,
        "max_flips": w,
    }));
    rec.bounds(json!({
        "required_average_error": 0.5,
    }));
    rec.verdict(
        "attack_error_at_least_half",
        attack.average_error,
        0.5,
        attack.average_error >= 0.5 - FP_SLACK,
    );
    rec.verdict(
        "attack_channel_fully_oblivious",
        attack.channel.image_size() as f64,
        1.0,
        attack.channel.image_size() == 1,
    );
    rec.verdict(
        "attack_channel_is_p_channel",
        attack.channel.max_support_weight() as f64,
        w as f64,
        attack.channel.max_support_weight() <= w,
    );
    if let Some(path) = &cfg.channel_out {
        formats::write_channel(Path::new(path), &attack.channel)?;
    }
    Ok(rec.finish())
}

/// Mutual-information solver: either on a channel file, or as the
/// designated-error demo contrasting image-size obliviousness with the
/// information measure.
pub fn run_mi(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let max_iter = cfg.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    if cfg.gap_demo.unwrap_or(false) {
        let n = cfg.require_n()?;
        if n > 10 {
            return Err(config_err(
                "gap demo enumerates all inputs; n must be <= 10",
            ));
        }
        let p = match cfg.p {
            Some(_) => cfg.require_p()?,
            None => 1.0,
        };
        let epsilon = cfg.epsilon.unwrap_or(0.5);
        let radius = floor_pn(p, n);
        let vol = ball_volume(n, radius);
        let inputs: Vec<Word> = (0..(1u64 << n)).map(|b| Word::new(n, b)).collect();
        let assignment: Vec<(Word, Word)> = inputs
            .iter()
            .map(|&x| (x, ball_word_at(n, radius, (x.bits() as u128) % vol)))
            .collect();
        let ch = designated_error_channel(n, p, epsilon, &assignment)?;
        let res = max_mutual_information(&ch, &inputs, tol, max_iter);
        let k_used = ch.image_size_on(&inputs);
        let row_sum_dev = inputs
            .iter()
            .map(|&x| {
                let s: f64 = ch
                    .distribution_for(x)
                    .support()
                    .iter()
                    .map(|&(_, q)| q)
                    .sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max);

        let mut rec = RecordBuilder::new("mi", cfg)?;
        rec.stats(json!({
            "mode": "gap-demo",
            "radius": radius,
            "ball_volume": vol as u64,
            "image_size": k_used,
            "gamma_by_image_size": 1.0 - f64::log2(k_used as f64) / n as f64,
            "gamma_by_mutual_information": 1.0 - res.bits / n as f64,
            "mutual_information_bits": res.bits,
            "solver_gap": res.gap,
            "solver_iterations": res.iterations,
        }));
        rec.bounds(json!({
            "log2_image_size": f64::log2(k_used as f64),
            "tolerance": tol,
        }));
        rec.verdict(
            "mutual_information_at_most_log_image_size",
            res.bits,
            f64::log2(k_used as f64) + 1e-6,
            res.bits <= f64::log2(k_used as f64) + 1e-6,
        );
        rec.verdict(
            "designated_rows_sum_to_one",
            row_sum_dev,
            1e-12,
            row_sum_dev <= 1e-12,
        );
        rec.verdict("solver_converged", res.gap, tol, res.converged);
        return Ok(rec.finish());
    }

    let path = cfg
        .channel_file
        .as_ref()
        .ok_or_else(|| config_err("mi needs `channel_file` or `gap_demo`"))?;
    let ch = formats::read_channel(Path::new(path))?;
    let n = ch.n();
    let inputs: Vec<Word> = if n <= 12 {
        (0..(1u64 << n)).map(|b| Word::new(n, b)).collect()
    } else {
        let keys: Vec<Word> = ch.assignments().keys().copied().collect();
        if keys.is_empty() {
            return Err(config_err(
                "channel is too wide to enumerate and has no explicit assignments",
            ));
        }
        keys
    };
    let res = max_mutual_information(&ch, &inputs, tol, max_iter);
    let k_used = ch.image_size_on(&inputs);

    let mut rec = RecordBuilder::new("mi", cfg)?;
    rec.stats(json!({
        "mode": "channel-file",
        "inputs": inputs.len(),
        "image_size": k_used,
        "mutual_information_bits": res.bits,
        "solver_gap": res.gap,
        "solver_iterations": res.iterations,
        "gamma_by_image_size": 1.0 - f64::log2(k_used as f64) / n as f64,
        "gamma_by_mutual_information": 1.0 - res.bits / n as f64,
    }));
    rec.bounds(json!({
        "log2_image_size": f64::log2(k_used as f64),
        "tolerance": tol,
    }));
    rec.verdict(
        "mutual_information_at_most_log_image_size",
        res.bits,
        f64::log2(k_used as f64) + 1e-6,
        res.bits <= f64::log2(k_used as f64) + 1e-6,
    );
    rec.verdict("solver_converged", res.gap, tol, res.converged);
    Ok(rec.finish())
}

/// Samples a codebook and writes it to `out`.
pub fn run_gen_code(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let n = cfg.require_n()?;
    let num_words = cfg.resolve_num_words(n)?;
    let cb = Codebook::sample_random(n, num_words, cfg.seed());
    let path = cfg
        .code_out
        .clone()
        .or_else(|| cfg.out.clone())
        .ok_or_else(|| config_err("gen-code needs `out` (codebook file path)"))?;
    formats::write_codebook(Path::new(&path), &cb)?;
    let mut rec = RecordBuilder::new("gen-code", cfg)?;
    rec.stats(json!({
        "num_words": num_words,
        "rate_effective": cb.rate(),
        "file": path,
    }));
    Ok(rec.finish())
}

/// Decodes one received word against a codebook file.
pub fn run_decode(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let cb = codebook_from_config(cfg)?;
    let y = parse_word(
        cfg.word
            .as_ref()
            .ok_or_else(|| config_err("missing received `word`"))?,
    )?;
    if y.len() != cb.n() {
        return Err(config_err("received word length differs from code"));
    }
    let res = decode(&cb, y);
    let mut rec = RecordBuilder::new("decode", cfg)?;
    rec.stats(json!({
        "index": res.index,
        "dist": res.dist,
        "tie_count": res.tie_count,
        "codeword": cb.word(res.index).to_string(),
    }));
    Ok(rec.finish())
}

/// Reports the disturbed set of one error against a codebook file.
pub fn run_disturb(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let cb = codebook_from_config(cfg)?;
    let e = parse_word(
        cfg.error
            .as_ref()
            .ok_or_else(|| config_err("missing `error` word"))?,
    )?;
    if e.len() != cb.n() {
        return Err(config_err("error word length differs from code"));
    }
    let set = disturbed_set(&cb, e);
    let mut rec = RecordBuilder::new("disturb", cfg)?;
    rec.stats(json!({
        "error": e.to_string(),
        "size": set.size(),
        "indices": set.indices,
    }));
    Ok(rec.finish())
}

/// Checks list decodability, or prints the parameter formulas with
/// `params = true`.
pub fn run_listdec(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    if cfg.params.unwrap_or(false) {
        let n = cfg.require_n()?;
        let rate = cfg.rate.ok_or_else(|| config_err("missing `rate`"))?;
        let p = cfg.require_p()?;
        let c = cfg.constant_c.unwrap_or(12.0);
        let params = listdec_params(n, rate, p, c);
        let mut rec = RecordBuilder::new("listdec", cfg)?;
        rec.stats(json!({
            "mode": "params",
            "ell_quadratic": params.ell_quadratic,
            "ell_general": params.ell_general,
            "failure_prob": params.failure_prob,
            "failure_prob_log2": params.failure_prob_log2,
            "constant_c": c,
        }));
        return Ok(rec.finish());
    }
    let cb = codebook_from_config(cfg)?;
    let radius = match (cfg.radius, cfg.p) {
        (Some(r), _) => r,
        (None, Some(_)) => floor_pn(cfg.require_p()?, cb.n()),
        _ => return Err(config_err("missing `radius` (or `p`)")),
    };
    if radius > cb.n() {
        return Err(config_err(format!(
            "radius {radius} exceeds block length {}",
            cb.n()
        )));
    }
    let ell = cfg
        .ell
        .unwrap_or(12 * (cb.n() as usize) * (cb.n() as usize));
    let budget = cfg.budget.unwrap_or(DEFAULT_CENTER_BUDGET);
    let mode = match cfg.mode.as_deref().unwrap_or("exhaustive") {
        "exhaustive" => ListDecodeMode::Exhaustive {
            max_centers: budget,
        },
        "sampled" => ListDecodeMode::Sampled {
            samples: cfg.samples.unwrap_or(10_000),
            seed: cfg.candidate_seed.unwrap_or_else(|| cfg.seed()),
        },
        other => return Err(config_err(format!("unknown mode `{other}`"))),
    };
    let report = cb.check_list_decodable(ell, radius, mode)?;
    let mut rec = RecordBuilder::new("listdec", cfg)?;
    rec.stats(json!({
        "mode": if report.exhaustive { "exhaustive" } else { "sampled" },
        "ell": report.ell,
        "radius": report.radius,
        "holds": report.holds,
        "witness": report.witness.map(|w| w.to_string()),
        "centers_examined": report.samples,
    }));
    match report.witness {
        Some(w) => rec.verdict_note(
            "list_decodability_holds",
            0.0,
            1.0,
            false,
            &format!("violating center {w}"),
        ),
        None => {
            if report.exhaustive {
                rec.verdict("list_decodability_holds", 1.0, 1.0, true)
            } else {
                rec.verdict_note(
                    "list_decodability_holds",
                    1.0,
                    1.0,
                    true,
                    "sampled scan found no violation; not conclusive",
                )
            }
        }
    };
    Ok(rec.finish())
}

/// Runs the greedy adversary against a codebook.
pub fn run_adversary(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let cb = codebook_from_config(cfg)?;
    let n = cb.n();
    let p = cfg.require_p()?;
    let k = match (cfg.k_budget, cfg.gamma) {
        (Some(k), _) => k.max(1),
        (None, Some(gamma)) => family_budget(n, gamma)?,
        _ => return Err(config_err("missing `k_budget` (or `gamma`)")),
    };
    let budget = cfg.budget.unwrap_or(DEFAULT_CENTER_BUDGET);
    let mode = match cfg.mode.as_deref().unwrap_or("exhaustive") {
        "exhaustive" => CandidateMode::Exhaustive {
            max_candidates: budget,
        },
        "sampled" => CandidateMode::Sampled {
            count: cfg.samples.unwrap_or(1000),
            seed: cfg.candidate_seed.unwrap_or_else(|| cfg.seed()),
        },
        other => return Err(config_err(format!("unknown mode `{other}`"))),
    };
    let out = greedy_oblivious_adversary(&cb, p, k, mode)?;
    let avg = average_error(&cb, &out.channel);
    let w = floor_pn(p, n);

    let mut rec = RecordBuilder::new("adversary", cfg)?;
    rec.stats(json!({
        "num_words": cb.num_words(),
        "candidates": out.candidates,
        "selected": out.selected.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "covered": out.covered,
        "coverage_rate": out.covered as f64 / cb.num_words() as f64,
        "average_error": avg,
        "family_size": out.channel.family_size(),
        "obliviousness_on_code": out.channel.obliviousness_on(cb.words()),
    }));
    rec.bounds(json!({
        "family_budget": k,
        "max_flips": w,
    }));
    rec.verdict(
        "adversary_channel_is_p_channel",
        out.channel.max_support_weight() as f64,
        w as f64,
        out.channel.max_support_weight() <= w,
    );
    rec.verdict(
        "adversary_family_within_budget",
        out.channel.family_size() as f64,
        k as f64,
        out.channel.family_size() <= k,
    );
    if let Some(path) = &cfg.channel_out {
        formats::write_channel(Path::new(path), &out.channel)?;
    }
    Ok(rec.finish())
}

/// Emits the rate-landscape CSV over a (p, gamma) grid plus the advantage
/// region summary.
pub fn run_bounds(cfg: &ExperimentConfig) -> CliResult<ExperimentRecord> {
    let p_from = cfg.p_from.unwrap_or(0.01);
    let p_to = cfg.p_to.unwrap_or(0.24);
    let p_step = cfg.p_step.unwrap_or(0.01);
    let g_from = cfg.gamma_from.unwrap_or(0.70);
    let g_to = cfg.gamma_to.unwrap_or(1.0);
    let g_step = cfg.gamma_step.unwrap_or(0.05);
    if p_step <= 0.0 || g_step <= 0.0 {
        return Err(config_err("grid steps must be positive"));
    }
    if !(0.0..0.5).contains(&p_from) || !(0.0..0.5).contains(&p_to) {
        return Err(config_err("p grid must stay within [0, 1/2)"));
    }
    if !(0.0..=1.0).contains(&g_from) || !(0.0..=1.0).contains(&g_to) {
        return Err(config_err("gamma grid must stay within [0, 1]"));
    }
    let resolution = cfg.resolution.unwrap_or(1e-4);

    let mut csv = String::from(
        "p,gamma,gamma_floor,theorem1,gv_rate,gv_clamped,bsc_capacity,cn_comparison\n",
    );
    let mut rows = 0u64;
    let mut p = p_from;
    while p <= p_to + 1e-12 {
        let mut gamma = g_from;
        while gamma <= g_to + 1e-12 {
            let pt = bound_point(p, gamma.min(1.0));
            let theorem1 = pt.theorem1.map(|v| v.to_string()).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                pt.p,
                pt.gamma,
                pt.gamma_floor,
                theorem1,
                pt.gv_rate,
                pt.gv_clamped,
                pt.bsc_capacity,
                pt.cn_comparison
            ));
            rows += 1;
            gamma += g_step;
        }
        p += p_step;
    }
    let region = gv_advantage_region(resolution);
    if let Some(path) = &cfg.out {
        std::fs::write(path, &csv)?;
    } else {
        print!("{csv}");
    }

    let mut rec = RecordBuilder::new("bounds", cfg)?;
    rec.stats(json!({
        "grid_rows": rows,
        "gv_advantage_sup_p": region.sup_p,
        "region_resolution": resolution,
    }));
    Ok(rec.finish())
}

/// Checks the tail expression at lambda <= 4N before reporting it; kept as
/// a harness-level helper for ad-hoc inspection through `bounds`.
pub fn vu_tail_checked(
    n: u32,
    num_words: u64,
    ell: u64,
    lambda: f64,
) -> CliResult<oblivch_core::VuTailBound> {
    Ok(vu_tail_bound(n, num_words, ell, lambda)?)
}
