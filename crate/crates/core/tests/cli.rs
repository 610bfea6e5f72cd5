//! Command-line behaviour: exit codes, report contents and determinism.

use std::path::PathBuf;
use std::process::Command;

use multinorm::cli::run;
use multinorm::scenario::GaloisScenario;
use serde_json::Value;

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel).to_string_lossy().into_owned()
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("multinorm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", o.stdout))
}

#[test]
fn compute_dw_fixture() {
    let o = cli(&["compute", &fixture("scenarios/fix_d.json"), "--json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["certificate"], "demarche-wei");
    assert_eq!(v["sha"], serde_json::json!([]));
    assert_eq!(v["status"], "exact");
}

#[test]
fn compute_with_oracle_check_appends_records() {
    let o = cli(&["compute", &fixture("scenarios/fix_b.json"), "--json", "--oracle-check"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["sha"], serde_json::json!([2]));
    let records = v["verification"].as_array().unwrap();
    assert!(!records.is_empty());
    for r in records {
        assert_eq!(r["verdict"], "pass", "{r}");
        for key in ["claim", "lhs", "rhs"] {
            assert!(r.get(key).is_some());
        }
    }
}

#[test]
fn compute_paranoid_cross_check() {
    let o = cli(&["compute", &fixture("scenarios/fix_b_split.json"), "--json", "--paranoid"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["paranoid"]["verdict"], "pass");
}

#[test]
fn malformed_file_is_an_input_error_with_position() {
    let o = cli(&["compute", &fixture("invalid/malformed.json")]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 3"), "{}", o.stderr);
}

#[test]
fn missing_file_is_an_input_error() {
    let o = cli(&["compute", &fixture("scenarios/does_not_exist.json")]);
    assert_eq!(o.code, 2);
}

#[test]
fn oracle_check_on_order_32_hits_the_cap() {
    let o = cli(&["compute", &fixture("scenarios/order32.json"), "--oracle-check"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("cap") && o.stderr.contains("--cap 32"), "{}", o.stderr);
    // Without the oracle the engine itself has no cap.
    assert_eq!(cli(&["compute", &fixture("scenarios/order32.json")]).code, 0);
}

#[test]
fn table_scenario_goes_through_oracle_only() {
    assert_eq!(cli(&["compute", &fixture("scenarios/s3_table.json")]).code, 2);
    let o = cli(&["oracle", &fixture("scenarios/s3_table.json"), "--lattice", "split", "--sha", "--json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["group_order"], 6);
    assert_eq!(v["sha"], serde_json::json!([]));
}

#[test]
fn oracle_biquadratic_second_kernel() {
    let o = cli(&["oracle", &fixture("scenarios/fix_b.json"), "--degree", "2", "--sha", "--json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o)["sha"], serde_json::json!([2]));
}

#[test]
fn cyclic_fixtures() {
    let one = cli(&["cyclic", &fixture("cyclic/g_group_1.json"), "--json"]);
    assert_eq!(one.code, 0);
    assert_eq!(json(&one)["sha"], serde_json::json!([]));
    let two = cli(&["cyclic", &fixture("cyclic/g_group_2.json"), "--json", "--paranoid"]);
    assert_eq!(two.code, 0);
    assert_eq!(json(&two)["sha"], serde_json::json!([2]));
}

#[test]
fn cyclic_datum_out_of_bounds() {
    let o = cli(&["cyclic", &fixture("invalid/bad_place.json")]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("e_i_v[0]"), "{}", o.stderr);
}

#[test]
fn reduce_round_trips() {
    for args in [&["--prime", "2"][..], &["--normalize"]] {
        let mut argv = vec!["reduce", "__path__"];
        argv.extend_from_slice(args);
        let path = fixture("scenarios/fix_d.json");
        argv[1] = &path;
        let o = cli(&argv);
        assert_eq!(o.code, 0, "{}", o.stderr);
        GaloisScenario::parse(&o.stdout).unwrap();
    }
    let o = cli(&["reduce", &fixture("scenarios/fix_b_split.json"), "--base-change"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    GaloisScenario::parse(&o.stdout).unwrap();
}

#[test]
fn reduce_hypothesis_violations() {
    // A non-cyclic designated factor cannot be base changed.
    assert_eq!(cli(&["reduce", &fixture("scenarios/fix_b.json"), "--base-change"]).code, 2);
    assert_eq!(cli(&["reduce", &fixture("scenarios/fix_d.json"), "--prime", "4"]).code, 2);
    assert_eq!(cli(&["reduce", &fixture("scenarios/fix_d.json")]).code, 2);
    assert_eq!(cli(&["reduce", &fixture("scenarios/fix_d.json"), "--prime", "2", "--normalize"]).code, 2);
}

#[test]
fn tamagawa_of_biquadratic() {
    let o = cli(&["tamagawa", &fixture("scenarios/fix_b.json")]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), "2");
    let o = cli(&["tamagawa", &fixture("scenarios/fix_b.json"), "--json"]);
    assert_eq!(json(&o)["tamagawa"], serde_json::json!({"num": 2, "den": 1}));
}

#[test]
fn json_output_is_deterministic() {
    let runs = [
        &["compute", "scenarios/fix_d.json", "--json", "--oracle-check", "--rank-cap", "64"][..],
        &["oracle", "scenarios/s3_table.json", "--degree", "2", "--json"],
        &["cyclic", "cyclic/g_group_2.json", "--json"],
    ];
    for args in runs {
        let path = fixture(args[1]);
        let mut argv = args.to_vec();
        argv[1] = &path;
        let a = cli(&argv);
        let b = cli(&argv);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn batch_mode_writes_one_report_per_input() {
    let dir = std::env::temp_dir().join(format!("multinorm-batch-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let o = cli(&["compute", &fixture("scenarios"), "--json", "--out-dir", dir.to_str().unwrap()]);
    // The table scenario is rejected, so the batch reports an input error.
    assert_eq!(o.code, 2);
    let v = json(&o);
    assert_eq!(v["fix_d.json"]["certificate"], "demarche-wei");
    assert_eq!(v["s3_table.json"]["exit_code"], 2);
    let written = std::fs::read_to_string(dir.join("fix_b.report.json")).unwrap();
    assert_eq!(serde_json::from_str::<Value>(&written).unwrap(), v["fix_b.json"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_suites_pass() {
    let o = cli(&["verify", "--suite", "inflation", "--json"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(json(&o).as_array().unwrap().len(), 9);
    let o = cli(&["verify", &fixture("scenarios/fix_b.json")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn selftest_reduced_and_negative_control() {
    let o = cli(&["selftest", "--cap", "4", "--json"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(json(&o)["passed"], true);
    let o = cli(&["selftest", "--cap", "4", "--inject-fault"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("FAIL"));
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["frobnicate"]).code, 2);
    assert_eq!(cli(&["compute"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_multinorm");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["compute", &fixture("scenarios/fix_d.json")]), Some(0));
    assert_eq!(code(&["compute", &fixture("invalid/malformed.json")]), Some(2));
    assert_eq!(code(&["compute", &fixture("scenarios/order32.json"), "--oracle-check"]), Some(3));
    assert_eq!(code(&["selftest", "--cap", "2", "--inject-fault"]), Some(1));
}
