//! End-to-end checks of the `gsv` binary: exit codes, JSON report shapes,
//! and the documented worked examples.

use std::process::{Command, Output};

use serde_json::Value;

fn gsv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_report(args: &[&str]) -> (Value, Output) {
    let mut with_json = args.to_vec();
    with_json.push("--json");
    let output = gsv(&with_json);
    let report = serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    });
    (report, output)
}

#[test]
fn canonical_r1_s2_reports_the_minus_one_gluing() {
    let (report, output) = json_report(&["canonical", "--r", "1", "--s", "2"]);
    assert!(output.status.success());
    assert_eq!(report["verdict"], "OK");
    assert_eq!(report["payload"]["verdict"], "CANONICAL_TRIVIAL");
    let pairs = report["payload"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["gluing"], -1);
    assert_eq!(pairs[0]["detFormulaMatched"], true);
}

#[test]
fn canonical_r2_s3_certifies_three_pairs() {
    let (report, output) = json_report(&["canonical", "--r", "2", "--s", "3"]);
    assert!(output.status.success());
    let pairs = report["payload"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 3);
    for pair in pairs {
        let gluing = pair["gluing"].as_i64().unwrap();
        assert!(gluing == 1 || gluing == -1);
    }
    assert_eq!(report["payload"]["cocycleTriplesChecked"], 1);
}

#[test]
fn canonical_respects_adjacent_pair_scope() {
    let (report, _) = json_report(&["canonical", "--r", "2", "--s", "4", "--pairs", "adjacent"]);
    // 2-subsets of {1..4}: 15 unordered pairs, 12 of them adjacent
    assert_eq!(report["payload"]["pairs"].as_array().unwrap().len(), 12);
    let (all, _) = json_report(&["canonical", "--r", "2", "--s", "4"]);
    assert_eq!(all["payload"]["pairs"].as_array().unwrap().len(), 15);
}

#[test]
fn usage_errors_exit_64() {
    let output = gsv(&["canonical", "--r", "3", "--s", "2"]);
    assert_eq!(output.status.code(), Some(64));
    let output = gsv(&["canonical", "--r", "1", "--s", "2", "--bogus-flag"]);
    assert_eq!(output.status.code(), Some(64));
    let output = gsv(&["orbit", "/nonexistent/point.json"]);
    assert_eq!(output.status.code(), Some(64));
}

#[test]
fn oversized_spec_exits_budget_code() {
    let output = gsv(&["canonical", "--r", "3", "--s", "6"]);
    assert_eq!(output.status.code(), Some(2));
    let (report, _) = json_report(&["canonical", "--r", "3", "--s", "6"]);
    assert_eq!(report["verdict"], "BUDGET_EXCEEDED");
}

#[test]
fn absurd_sizes_refuse_immediately_instead_of_hanging() {
    for args in [
        vec!["canonical", "--r", "1000000", "--s", "2000000"],
        vec!["weights", "--r", "1000000", "--s", "2000000"],
        vec!["sweep", "--s", "1000000"],
    ] {
        let output = gsv(&args);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn weights_r1_s2_and_r4_s6() {
    let (report, output) = json_report(&["weights", "--r", "1", "--s", "2"]);
    assert!(output.status.success());
    assert_eq!(report["payload"]["tangentWeightCount"], 3);
    assert_eq!(report["payload"]["canonicalWeight"], serde_json::json!([0, 0]));
    assert_eq!(report["payload"]["pairing"], "RECIPROCAL_PAIRS_OK");
    assert_eq!(report["payload"]["verdict"], "THEOREM1_OK");

    let (report, _) = json_report(&["weights", "--r", "4", "--s", "6"]);
    assert_eq!(report["payload"]["tangentWeightCount"], 32);
    assert_eq!(
        report["payload"]["canonicalWeight"],
        serde_json::json!([0, 0, 0, 0, 0, 0])
    );
}

#[test]
fn weights_output_is_stable_across_reruns() {
    let run = || gsv(&["weights", "--r", "2", "--s", "5", "--json"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn orbit_base_point_yields_identity_witness() {
    let dir = std::env::temp_dir().join("gsv-cli-test-base");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("base.json");
    std::fs::write(
        &path,
        r#"{"r": 2, "s": 3, "X": [["1","0","0"],["0","1","0"]], "Y": [["1","0"],["0","1"],["0","0"]]}"#,
    )
    .unwrap();
    let (report, output) = json_report(&["orbit", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert_eq!(report["payload"]["membership"], true);
    assert_eq!(report["payload"]["jacobianRank"], 4);
    assert_eq!(report["payload"]["roundTripVerified"], true);
    // [Y0 | kernel(X0)] is the identity
    assert_eq!(
        report["payload"]["witness"]["B"],
        serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
    );
}

#[test]
fn orbit_worked_example_witness() {
    let dir = std::env::temp_dir().join("gsv-cli-test-worked");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("point.json");
    std::fs::write(
        &path,
        r#"{"r": 1, "s": 2, "X": [["2", "3"]], "Y": [["1/2"], ["0"]]}"#,
    )
    .unwrap();
    let (report, output) = json_report(&["orbit", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert_eq!(
        report["payload"]["witness"]["B"],
        serde_json::json!([["1/2", "3"], ["0", "-2"]])
    );
}

#[test]
fn orbit_off_variety_reports_the_violated_entry() {
    let dir = std::env::temp_dir().join("gsv-cli-test-off");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("off.json");
    std::fs::write(
        &path,
        r#"{"r": 1, "s": 2, "X": [["1", "0"]], "Y": [["0"], ["0"]]}"#,
    )
    .unwrap();
    let (report, output) = json_report(&["orbit", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(report["verdict"], "FAILED");
    assert_eq!(report["payload"]["membership"], false);
    assert_eq!(report["payload"]["violation"]["row"], 1);
    assert_eq!(report["payload"]["violation"]["col"], 1);
    assert_eq!(report["payload"]["violation"]["residual"], "-1");
}

#[test]
fn sweep_to_three_is_all_ok_with_two_errata() {
    let (report, output) = json_report(&["sweep", "--s", "3"]);
    assert!(output.status.success());
    assert_eq!(report["verdict"], "OK");
    assert_eq!(report["paperErrata"].as_array().unwrap().len(), 2);
    let specs = report["payload"]["specs"].as_array().unwrap();
    assert_eq!(specs.len(), 6); // (1,1),(1,2),(2,2),(1,3),(2,3),(3,3)
    for entry in specs {
        assert_eq!(entry["canonical"]["verdict"], "CANONICAL_TRIVIAL");
        assert_eq!(entry["weights"]["verdict"], "THEOREM1_OK");
        assert_eq!(entry["homogeneity"]["ok"], true);
    }
}

#[test]
fn out_file_matches_json_stdout() {
    let dir = std::env::temp_dir().join("gsv-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let output = gsv(&[
        "weights",
        "--r",
        "1",
        "--s",
        "3",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, output.stdout);
}

#[test]
fn atlas_lists_solved_rows() {
    let (report, output) = json_report(&["atlas", "--r", "1", "--s", "2"]);
    assert!(output.status.success());
    let charts = report["payload"]["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    assert_eq!(charts[0]["I"], serde_json::json!([1]));
    assert_eq!(charts[0]["solved"]["y1_1"], "(-x1_2*y2_1 + 1)/x1_1");
    assert_eq!(charts[0]["solvesEquations"], true);
    assert_eq!(charts[0]["freeCoordCount"], 3);
}

#[test]
fn human_output_mentions_verdict_and_json_flag_switches_format() {
    let human = gsv(&["weights", "--r", "1", "--s", "2"]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(text.contains("verdict: OK"));
    assert!(!text.trim_start().starts_with('{'));
    let json = gsv(&["weights", "--r", "1", "--s", "2", "--json"]);
    let text = String::from_utf8(json.stdout).unwrap();
    assert!(text.trim_start().starts_with('{'));
}
