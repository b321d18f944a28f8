//! End-to-end tests of the binary: exit codes, stream separation, JSON
//! shape, and output determinism.

use assert_cmd::Command;

use dynkin_count::cli::Report;

fn dynkin(args: &[&str]) -> std::process::Output {
    Command::cargo_bin("dynkin-count")
        .unwrap()
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(output: &std::process::Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &std::process::Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn count_prints_grouped_text_and_exits_zero() {
    let output = dynkin(&["count", "E6", "--routes", "closed,recursive"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("e(E6) = 41_472 = 2^9·3^4"));
    assert!(stdout.contains("routes agree"));
    assert!(stderr_of(&output).contains("elapsed"));
}

#[test]
fn small_values_stay_ungrouped() {
    let output = dynkin(&["count", "A4"]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("e(A4) = 125 = 5^3"));
}

#[test]
fn parse_errors_exit_two() {
    for spec in ["E9", "A5+", "H3", "A", ""] {
        let output = dynkin(&["count", spec]);
        assert_eq!(output.status.code(), Some(2), "{spec:?}");
        assert!(stderr_of(&output).starts_with("error:"), "{spec:?}");
    }
}

#[test]
fn unknown_table_kinds_exit_two() {
    let output = dynkin(&["table", "nope"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn chains_on_unions_exit_two() {
    let output = dynkin(&["chains", "A2+A2"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn exhausted_budgets_exit_four() {
    let output = dynkin(&["chains", "E6"]);
    assert_eq!(output.status.code(), Some(4));
    assert!(stderr_of(&output).contains("budget"));
    assert_eq!(stdout_of(&output), "");

    let output = dynkin(&["chains", "D4", "--budget", "50"]);
    assert_eq!(output.status.code(), Some(4));
}

#[test]
fn custom_budgets_large_enough_succeed() {
    let output = dynkin(&["chains", "D4", "--budget", "2000"]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("162"));
}

#[test]
fn high_budget_finishes_e6_and_matches() {
    let output = dynkin(&["chains", "E6", "--budget", "high"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("chains(E6) = 41_472"));
    assert!(stdout.contains("matches the closed form"));
}

#[test]
fn json_error_objects_carry_the_kind() {
    let output = dynkin(&["chains", "E6", "--json"]);
    assert_eq!(output.status.code(), Some(4));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(value["error"]["kind"], "budget-exhausted");
}

#[test]
fn json_reports_round_trip() {
    let output = dynkin(&[
        "count",
        "B3+A2+A2",
        "--json",
        "--routes",
        "closed,recursive,oracle",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(value["agree"], true);
    let reports: Vec<Report> = serde_json::from_value(value["reports"].clone()).unwrap();
    assert_eq!(reports.len(), 3);
    for report in &reports {
        assert_eq!(report.spec, "A2+A2+B3");
        assert_eq!(report.e, "51030");
        let reencoded = serde_json::to_value(report).unwrap();
        let reparsed: Report = serde_json::from_value(reencoded).unwrap();
        assert_eq!(&reparsed, report);
    }
}

#[test]
fn text_stdout_is_bit_identical_across_runs() {
    let args = ["count", "E7", "--routes", "closed,recursive"];
    let first = dynkin(&args);
    let second = dynkin(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_stdout_is_identical_modulo_timing() {
    let args = ["count", "A5+D4+B3", "--json", "--routes", "closed,recursive"];
    let normalize = |raw: &[u8]| -> serde_json::Value {
        let mut value: serde_json::Value = serde_json::from_slice(raw).unwrap();
        for report in value["reports"].as_array_mut().unwrap() {
            report["timing_ms"] = 0.into();
        }
        value
    };
    let first = dynkin(&args);
    let second = dynkin(&args);
    assert!(first.status.success());
    assert_eq!(normalize(&first.stdout), normalize(&second.stdout));
}

#[test]
fn verify_to_rank_eight_passes() {
    let output = dynkin(&["verify", "--max-rank", "8"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("E8"));
    assert!(stdout.contains("holds for all 34 diagrams"));
    assert!(!stdout.contains("MISMATCH"));
}

#[test]
fn series_text_carries_the_verdicts() {
    let output = dynkin(&["series"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("through order 20"));
    assert!(stdout.contains("holds"));
    assert!(stdout.contains("all collapse to (x+y)^n"));
}

#[test]
fn breakdown_table_of_e7_prints_the_d6_row() {
    let output = dynkin(&["table", "breakdown:E7"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("vertex 2  ->  D6"));
    assert!(stdout.contains("e = 31_250"));
    assert!(stdout.contains("e(E7) = (18/2)·118_098 = 1_062_882"));
}

#[test]
fn e_table_ranks_default_to_eight() {
    let output = dynkin(&["table", "e"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    assert!(stdout.contains("E8"));
    assert!(stdout.contains("37_968_750"));
    assert!(!stdout.contains("A9"));
}

#[test]
fn help_lists_all_subcommands() {
    let output = dynkin(&["--help"]);
    assert!(output.status.success());
    let stdout = stdout_of(&output);
    for subcommand in ["count", "verify", "chains", "table", "series"] {
        assert!(stdout.contains(subcommand), "missing {subcommand}");
    }
}
