//! End-to-end tests of the `wehrlab` binary: the documented invocations,
//! the exit-code contract (0 pass / 1 usage / 2 failed check), output
//! determinism across job counts, and the data-file formats.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wehrlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("data file readable")
}

/// Extracts a named column of a CSV data file as floats.
fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header = lines.next().expect("csv header");
    let index = header
        .split(',')
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("column {name} in {header}"));
    lines
        .map(|line| {
            line.split(',')
                .nth(index)
                .expect("row has the column")
                .parse()
                .expect("numeric cell")
        })
        .collect()
}

#[test]
fn sweep_gap_decreases_toward_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let result = run(&[
        "sweep",
        "--s",
        "0",
        "--a",
        "1,10,100,1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let gaps = csv_column(&read(&out), "gap");
    assert_eq!(gaps.len(), 4);
    for pair in gaps.windows(2) {
        assert!(pair[1] < pair[0], "gap must decrease: {gaps:?}");
    }
    assert!(gaps.iter().all(|&g| g > 0.0), "gaps stay positive: {gaps:?}");
    assert!(gaps[3] < 1e-6, "gap approaches zero: {gaps:?}");
    assert!(stdout(&result).contains("4/4 pass"));
}

#[test]
fn oracle_check_agrees_with_closed_form() {
    let result = run(&["oracle-check", "--a", "3", "--kappa", "2", "--cutoff", "40"]);
    assert!(result.status.success(), "{}", stderr(&result));
    let text = stdout(&result);
    assert!(text.contains("pass"), "{text}");
    // The closed form gives exactly 1 at this design point; the Fock
    // quadrature must land within the documented 2e-3 (it is far closer).
    assert!(text.contains("gaussian=1.000000000000"), "{text}");
}

#[test]
fn oracle_check_exceeding_tolerance_exits_two() {
    let result = run(&[
        "oracle-check",
        "--a",
        "3",
        "--kappa",
        "2",
        "--cutoff",
        "16",
        "--radial",
        "6",
        "--angular",
        "6",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(result.status.code(), Some(2), "{}", stdout(&result));
    assert!(stdout(&result).contains("FAIL"));
}

#[test]
fn random_bipartite_suite_passes() {
    let result = run(&["verify-bipartite", "--random", "1000", "--seed", "7"]);
    assert!(result.status.success(), "{}", stderr(&result));
    assert!(stdout(&result).contains("1000/1000 pass"), "{}", stdout(&result));
}

#[test]
fn random_tripartite_suite_passes() {
    let result = run(&[
        "verify-tripartite",
        "--random",
        "60",
        "--seed",
        "11",
        "--modes-a",
        "1",
        "--modes-b",
        "2",
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    assert!(stdout(&result).contains("60/60 pass"), "{}", stdout(&result));
}

#[test]
fn family_state_verification_passes_both_relations() {
    let bi = run(&["verify-bipartite", "--s", "-2", "--a", "50", "--modes", "2"]);
    assert!(bi.status.success(), "{}", stderr(&bi));
    assert!(stdout(&bi).contains("1/1 pass"));
    let tri = run(&["verify-tripartite", "--s", "1", "--a", "30"]);
    assert!(tri.status.success(), "{}", stderr(&tri));
    assert!(stdout(&tri).contains("1/1 pass"));
}

#[test]
fn usage_errors_exit_one() {
    // Unknown subcommand, missing required argument, conflicting state
    // selections, and domain errors all exit 1 (2 means a failed check).
    for args in [
        vec!["frobnicate"],
        vec!["sweep"],
        vec!["verify-bipartite"],
        vec!["verify-bipartite", "--random", "3", "--s", "0", "--a", "5"],
        vec!["sweep", "--s", "0", "--a", "10,5"],
        vec!["witness", "--thermal", "0.7,0.9"],
        vec!["witness", "--s", "1"],
    ] {
        let result = run(&args);
        assert_eq!(result.status.code(), Some(1), "args {args:?}");
        assert!(!stderr(&result).is_empty(), "args {args:?} explain the error");
    }
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert!(help.status.success());
    let text = stdout(&help);
    for name in [
        "verify-bipartite",
        "verify-tripartite",
        "sweep",
        "tri-sweep",
        "witness",
        "oracle-check",
        "minimize",
        "state",
    ] {
        assert!(text.contains(name), "help lists {name}");
    }
    assert!(run(&["--version"]).status.success());
}

#[test]
fn reports_are_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let sequential = dir.path().join("sequential.csv");
    let parallel = dir.path().join("parallel.csv");
    let base = ["verify-bipartite", "--random", "40", "--seed", "5"];
    let mut first = base.to_vec();
    first.extend(["--jobs", "1", "--out", sequential.to_str().unwrap()]);
    let mut second = base.to_vec();
    second.extend(["--jobs", "4", "--out", parallel.to_str().unwrap()]);
    assert!(run(&first).status.success());
    assert!(run(&second).status.success());
    assert_eq!(read(&sequential), read(&parallel), "row order and bytes match");
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.json");
    let args = [
        "tri-sweep",
        "--a",
        "1,10",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = read(&out);
    assert!(run(&args).status.success());
    assert_eq!(first, read(&out));
}

#[test]
fn json_report_embeds_run_config_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let result = run(&[
        "sweep",
        "--s",
        "0.5",
        "--a",
        "1,10,100",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let config = &report["config"];
    assert_eq!(config["command"], "sweep");
    assert_eq!(config["cutoff"], 40);
    assert_eq!(config["radial_order"], 24);
    assert_eq!(config["angular_order"], 24);
    assert_eq!(config["jobs"], 1);
    assert_eq!(config["tolerance_floor"], 1e-9);
    assert_eq!(report["summary"]["total"], 3);
    assert_eq!(report["summary"]["passed"], 3);
    assert_eq!(report["records"].as_array().unwrap().len(), 3);
    assert_eq!(report["records"][0]["descriptor"]["family"], "optimal-sequence");
}

#[test]
fn out_dir_env_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let result = Command::new(env!("CARGO_BIN_EXE_wehrlab"))
        .args(["sweep", "--s", "0", "--a", "1,10", "--out", "nested/rel.csv"])
        .env("WEHRLAB_OUT_DIR", dir.path())
        .output()
        .expect("binary runs");
    assert!(result.status.success(), "{}", stderr(&result));
    let expected = dir.path().join("nested/rel.csv");
    assert!(expected.is_file(), "file lands inside WEHRLAB_OUT_DIR");
    assert_eq!(csv_column(&read(&expected), "gap").len(), 2);
}

#[test]
fn witness_verdicts() {
    let entangled = run(&["witness", "--s", "-2", "--a", "1000"]);
    assert!(entangled.status.success(), "{}", stderr(&entangled));
    assert!(stdout(&entangled).contains("verdict=entangled"));
    // The two-mode vacuum (a = 1) is a product state: necessarily
    // inconclusive, and still exit 0 - "inconclusive" is not a failure.
    let inconclusive = run(&["witness", "--tmsv", "1"]);
    assert!(inconclusive.status.success());
    assert!(stdout(&inconclusive).contains("verdict=inconclusive"));
}

#[test]
fn minimize_family_search_reports_small_positive_infimum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("minimize.json");
    let result = run(&[
        "minimize",
        "--family",
        "optimal-sequence",
        "--s",
        "0",
        "--a-max",
        "1000",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let infimum = report["records"][0]["infimum"].as_f64().unwrap();
    assert!(infimum > 0.0 && infimum <= 5e-3, "infimum {infimum}");
}

#[test]
fn tri_sweep_sum_approaches_two_bit_floor() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tri.csv");
    let result = run(&[
        "tri-sweep",
        "--a",
        "1,10,100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let text = read(&out);
    let gaps = csv_column(&text, "gap");
    for pair in gaps.windows(2) {
        assert!(pair[1] < pair[0], "sum descends toward M ln4: {gaps:?}");
    }
    assert!(gaps[2] > 0.0 && gaps[2] < 1e-3, "{gaps:?}");
    let sums = csv_column(&text, "sum");
    let ln4 = 4.0_f64.ln();
    assert!(sums.iter().all(|&s| s >= ln4), "{sums:?}");
}

#[test]
fn state_show_reports_spectrum_entropy_and_validity() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("state.json");
    let result = run(&[
        "state",
        "show",
        "--tmsv",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", stderr(&result));
    let report: serde_json::Value = serde_json::from_str(&read(&out)).unwrap();
    let record = &report["records"][0];
    assert_eq!(record["validity"]["is_valid"], true);
    // A two-mode squeezed state is pure: both symplectic eigenvalues 1/2.
    let nu = record["symplectic_eigenvalues"].as_array().unwrap();
    assert_eq!(nu.len(), 2);
    for value in nu {
        assert!((value.as_f64().unwrap() - 0.5).abs() < 1e-9);
    }
    assert!(record["von_neumann_entropy"].as_f64().unwrap().abs() < 1e-9);
    assert_eq!(record["state"]["sigma"].as_array().unwrap().len(), 16);
}
