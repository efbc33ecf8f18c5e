//! End-to-end CLI behavior: exit codes, config files, flag overrides, and
//! artifact round-trips through the binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_oblivch")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("OBLIVCH_WORKERS", "2")
        .output()
        .expect("binary runs")
}

#[test]
fn exit_code_zero_when_all_verdicts_pass() {
    let out = run(&[
        "lemma31",
        "--n",
        "10",
        "--num-words",
        "16",
        "--error-weight",
        "2",
        "--trials",
        "200",
        "--seed",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ALL PASS"));
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 2);
}

#[test]
fn exit_code_one_when_a_verdict_fails() {
    let dir = tmp_dir("cli_exit1");
    let code = dir.join("cluster.txt");
    std::fs::write(&code, "n=3 N=3 origin=explicit\n000\n001\n010\n").unwrap();
    // Center 000 holds all three codewords at radius 1, so ell = 2 fails.
    let out = run(&[
        "listdec",
        "--code",
        code.to_str().unwrap(),
        "--ell",
        "2",
        "--radius",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL list_decodability_holds"));
    assert!(stdout.contains("000"), "witness missing: {stdout}");
}

#[test]
fn exit_code_two_on_usage_and_config_errors() {
    for args in [
        vec!["frobnicate"],
        vec!["lemma31", "--unknown-flag", "3"],
        vec!["lemma31", "--n"],
        vec!["lemma31", "--n", "ten"],
        vec!["concentration", "--n", "10"], // missing p/gamma/delta
        vec!["decode", "--code", "/nonexistent/code.txt", "--word", "101"],
        // Domain violations are config errors, not panics.
        vec![
            "gen-code",
            "--n",
            "70",
            "--num-words",
            "4",
            "--out",
            "/dev/null",
        ],
        vec![
            "theorem1", "--n", "10", "--p", "0.6", "--gamma", "1.0", "--delta", "0.1",
        ],
        vec![
            "concentration",
            "--n",
            "10",
            "--p",
            "0.2",
            "--gamma",
            "1.4",
            "--delta",
            "0.05",
        ],
        vec!["expurgate", "--n", "8", "--num-words", "5", "--p", "-0.1"],
        vec!["bounds", "--p-to", "0.6"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {args:?} gave {:?}",
            out.status.code()
        );
    }
}

#[test]
fn attack_on_wide_code_reports_infeasible() {
    // Repetition code has distance 8 > 2*floor(p*n) at p = 0.13.
    let out = run(&["attack-linear", "--rows", "11111111", "--p", "0.13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("attack infeasible"));
}

#[test]
fn config_file_supplies_parameters_and_flags_override() {
    let dir = tmp_dir("cli_config");
    let cfg_path = dir.join("exp.json");
    std::fs::write(
        &cfg_path,
        r#"{"n": 10, "num_words": 16, "error_weight": 2, "trials": 200, "seed": 5}"#,
    )
    .unwrap();
    let rec_a = dir.join("a.json");
    let out = run(&[
        "lemma31",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        rec_a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rec_a).unwrap()).unwrap();
    assert_eq!(record["config"]["seed"], 5);
    assert_eq!(record["stats"]["trials"], 200);

    // A flag overrides the file value.
    let rec_b = dir.join("b.json");
    let out = run(&[
        "lemma31",
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "6",
        "--out",
        rec_b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rec_b).unwrap()).unwrap();
    assert_eq!(record["config"]["seed"], 6);
}

#[test]
fn gen_code_artifact_round_trips_through_decode() {
    let dir = tmp_dir("cli_roundtrip");
    let code = dir.join("code.txt");
    let out = run(&[
        "gen-code",
        "--n",
        "9",
        "--rate",
        "0.4",
        "--seed",
        "21",
        "--out",
        code.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&code).unwrap();
    // floor(2^{0.4 * 9}) = floor(2^3.6) = 12 codewords.
    assert!(
        text.starts_with("n=9 N=12 origin=random-with-seed:21\n"),
        "{text}"
    );

    let rec = dir.join("decode.json");
    let out = run(&[
        "decode",
        "--code",
        code.to_str().unwrap(),
        "--word",
        "101010101",
        "--out",
        rec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rec).unwrap()).unwrap();
    let idx = record["stats"]["index"].as_u64().unwrap();
    assert!(idx < 12);
}

#[test]
fn expurgate_writes_subcode_and_channel_artifacts() {
    let dir = tmp_dir("cli_expurgate");
    let sub = dir.join("subcode.txt");
    let ch = dir.join("channel.txt");
    let out = run(&[
        "expurgate",
        "--n",
        "12",
        "--num-words",
        "30",
        "--seed",
        "8",
        "--p",
        "0.17",
        "--subcode-out",
        sub.to_str().unwrap(),
        "--channel-out",
        ch.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let sub_text = std::fs::read_to_string(&sub).unwrap();
    assert!(sub_text.starts_with("n=12"));
    let ch_text = std::fs::read_to_string(&ch).unwrap();
    assert!(ch_text.starts_with("n=12"));
    assert!(ch_text.contains("default ->"));

    // The written channel feeds back into the mutual-information solver.
    let out = run(&["mi", "--channel", ch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bounds_emits_csv_with_frozen_columns() {
    let dir = tmp_dir("cli_bounds");
    let csv = dir.join("landscape.csv");
    let out = run(&[
        "bounds",
        "--p-from",
        "0.02",
        "--p-to",
        "0.1",
        "--p-step",
        "0.02",
        "--gamma-from",
        "0.9",
        "--gamma-to",
        "1.0",
        "--gamma-step",
        "0.05",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "p,gamma,gamma_floor,theorem1,gv_rate,gv_clamped,bsc_capacity,cn_comparison"
    );
    assert!(lines.count() >= 15);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("ALL PASS"));
}

#[test]
fn concentration_csv_row_matches_documented_columns() {
    let dir = tmp_dir("cli_csv");
    let csv = dir.join("stats.csv");
    let out = run(&[
        "concentration",
        "--n",
        "10",
        "--p",
        "0.2",
        "--gamma",
        "0.99",
        "--delta",
        "0.05",
        "--trials",
        "300",
        "--seed",
        "2",
        "--csv-out",
        csv.to_str().unwrap(),
    ]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "n,num_words,error_weight,trials,seed,empirical_mean,empirical_max,sample_std,exact_mean,deviation_threshold,tail_frequency,prng"
    );
    let row = lines.next().unwrap();
    assert_eq!(row.split(',').count(), header.split(',').count());
    assert!(row.ends_with("splitmix64-v1"));
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in [
        "gen-code",
        "decode",
        "disturb",
        "listdec",
        "attack-linear",
        "expurgate",
        "adversary",
        "mi",
        "bounds",
        "lemma31",
        "concentration",
        "lemma22",
        "theorem1",
    ] {
        assert!(text.contains(cmd), "help is missing {cmd}");
    }
}
