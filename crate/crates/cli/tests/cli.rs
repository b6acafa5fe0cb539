//! End-to-end tests against the built binary: frozen outputs, exit-code
//! contract, report determinism, and input validation messages.

use std::path::Path;
use std::process::Command;

use num_rational::BigRational;
use serde_json::Value;

fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_dimrank"))
        .args(args)
        .envs(envs.iter().copied().map(|(k, v)| (k.to_string(), v.to_string())))
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("utf8 stdout"),
        String::from_utf8(output.stderr).expect("utf8 stderr"),
    )
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_in(Path::new("."), args, &[])
}

fn report(stdout: &str) -> Value {
    let v: Value = serde_json::from_str(stdout).expect("stdout is JSON");
    v["report"].clone()
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn construct_frozen_example() {
    let (code, stdout, _) = run(&["construct", "--c", "2/1", "--stages", "2"]);
    assert_eq!(code, 0);
    let r = report(&stdout);

    let params = r["params"].as_array().unwrap();
    let row = |i: usize, key: &str| params[i][key].as_str().unwrap().to_string();
    assert_eq!((row(0, "m"), row(0, "s"), row(0, "n"), row(0, "p")), ("4".into(), "0".into(), "3".into(), "4".into()));
    assert_eq!((row(1, "m"), row(1, "s"), row(1, "n"), row(1, "p")), ("4".into(), "1".into(), "15".into(), "16".into()));

    let radii = r["failure_radii"].as_array().unwrap();
    assert_eq!(radii[1]["radius"], "1/1");
    assert_eq!(r["rc_lower_bound"], "1/1");
    assert_eq!(
        radii[1]["subequivalence"]["certificate"]["rule"],
        "chern_obstruction"
    );
}

#[test]
fn sr_frozen_example() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        &dir,
        "block.json",
        r#"{"block": {"summands": [{"space": {"cw_dim": 5}, "unit_rank": 1}]}}"#,
    );
    let (code, stdout, _) = run(&["sr", &spec]);
    assert_eq!(code, 0);
    assert_eq!(report(&stdout)["stable_ranks"][0], "3");
}

#[test]
fn rc_bound_frozen_example_and_amplification() {
    let (code, stdout, _) = run(&["rc-bound", "--dim", "5", "--rank", "1"]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    assert_eq!(r["witness"]["bound"], "1/1");
    assert_eq!(r["verification"]["verified"], true);
    assert_eq!(r["verification"]["cone_excluded"], true);

    let (code, stdout, _) =
        run(&["rc-bound", "--dim", "9", "--rank", "1", "--amplify", "3"]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    assert_eq!(r["witness"]["bound"], "3/1");
    assert_eq!(r["amplified"]["bound"], "1/1");
    assert_eq!(r["amplified"]["verified"], true);
}

#[test]
fn reports_are_byte_identical() {
    let first = run(&["construct", "--c", "7/3", "--stages", "4"]);
    let second = run(&["construct", "--c", "7/3", "--stages", "4"]);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, second.1, "construct runs differ");

    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir,
        "pos.json",
        r#"{"n_factors": 6, "classes": [{"line_sum": {"p_count": 6, "trivial_offset": -1}}, {"trivial": 3}]}"#,
    );
    let first = run(&["positivity", &input]);
    let second = run(&["positivity", &input]);
    assert_eq!(first.1, second.1, "positivity runs differ");
}

#[test]
fn unknown_verdicts_downgrade_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // A line bundle on two factors: positive, but below every rule's reach.
    let input = write(
        &dir,
        "pos.json",
        r#"{"n_factors": 2, "classes": [{"terms": [
            {"subset": [], "coeff": 1}, {"subset": [1], "coeff": 1},
            {"subset": [2], "coeff": 1}, {"subset": [1, 2], "coeff": 1}]}]}"#,
    );
    let (code, stdout, _) = run(&["positivity", &input]);
    assert_eq!(code, 2);
    let r = report(&stdout);
    assert_eq!(r["verdicts"][0]["verdict"]["decision"], "unknown");
}

#[test]
fn input_errors_exit_3_with_location() {
    let dir = tempfile::tempdir().unwrap();

    let (code, _, stderr) = run(&["positivity", "no-such-file.json"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("no-such-file.json"));

    let garbled = write(&dir, "garbled.json", r#"{"n_factors": 2, "classes": ["#);
    let (code, _, stderr) = run(&["positivity", &garbled]);
    assert_eq!(code, 3);
    assert!(stderr.contains("line"), "no location in: {stderr}");

    let unknown_field = write(&dir, "unknown.json", r#"{"n_factors": 2, "classes": [], "x": 1}"#);
    let (code, _, stderr) = run(&["positivity", &unknown_field]);
    assert_eq!(code, 3);
    assert!(stderr.contains("unknown field"), "{stderr}");

    let semantic = write(
        &dir,
        "semantic.json",
        r#"{"n_factors": 2, "classes": [{"line_sum": {"p_count": -1, "trivial_offset": 0}}]}"#,
    );
    let (code, _, stderr) = run(&["positivity", &semantic]);
    assert_eq!(code, 3);
    assert!(stderr.contains("classes[0]"), "no path in: {stderr}");

    let (code, _, _) = run(&["construct", "--c", "0.5", "--stages", "2"]);
    assert_eq!(code, 3, "decimal rationals must be rejected");
}

#[test]
fn certificates_go_to_the_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("certs.json");
    let (code, stdout, _) = run(&[
        "construct",
        "--c",
        "1/1",
        "--stages",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let full: Value = serde_json::from_str(&stdout).unwrap();
    let certs: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(certs["input_digest"], full["meta"]["input_digest"]);
    let list = certs["certificates"].as_array().unwrap();
    assert_eq!(list.len(), 6, "a verdict and a radius certificate per stage");
    assert!(list.iter().any(|c| c["subject"] == "y_class_stage_3"));
}

#[test]
fn dense_factor_cap_is_enforced_and_adjustable() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir,
        "wide.json",
        r#"{"n_factors": 18, "classes": [{"terms": [{"subset": [18], "coeff": 2}]}]}"#,
    );
    let (code, _, stderr) = run(&["positivity", &input]);
    assert_eq!(code, 3);
    assert!(stderr.contains("DIMRANK_MAX_DENSE_FACTORS"), "{stderr}");

    let (code, stdout, _) = run_in(
        Path::new("."),
        &["positivity", &input],
        &[("DIMRANK_MAX_DENSE_FACTORS", "20")],
    );
    assert_eq!(code, 0, "a lone bott coordinate is refuted exactly");
    let r = report(&stdout);
    assert_eq!(r["verdicts"][0]["verdict"]["certificate"]["rule"], "nonzero_rank_zero");
}

#[test]
fn compare_runs_all_checkers() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        &dir,
        "cmp.json",
        r#"{
            "model": {"semigroup": {"generators": [[2, 0], [0, 3], [1, 1]]}},
            "pairs": [[[0, 0], [2, 0]], [[2, 0], [2, 0]]]
        }"#,
    );
    let (code, stdout, _) = run(&["compare", "--r", "1/10", &input]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    for key in ["strict_comparison", "cancellation", "fcq"] {
        assert_eq!(r[key]["tested"], 2, "{key}");
        assert_eq!(r[key]["holds_on_set"], "true", "{key}");
    }
    assert_eq!(r["interpolation"], Value::Null);

    let input = write(
        &dir,
        "cmp2.json",
        r#"{
            "model": {"sphere_even": {"half_dim": 3, "unit_rank": 3}},
            "pairs": [],
            "interpolation": {
                "x1": [0, 0], "x2": [0, 1], "y1": [3, 0], "y2": [3, 1],
                "box_bound": 9
            }
        }"#,
    );
    let (code, stdout, _) = run(&["compare", "--r", "1/2", &input]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    assert_eq!(r["interpolation"]["outcome"], "no_interpolant");
    assert_eq!(r["interpolation"]["box_bound"], 9);
}

#[test]
fn aup_witness_rejects_low_dimension() {
    let (code, stdout, _) = run(&["aup-witness"]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    assert_eq!(r["verified"], true);
    assert_eq!(r["search"]["found"]["m"], 4);
    assert_eq!(r["search"]["found"]["n"], 3);

    let (code, _, stderr) = run(&["aup-witness", "--dim", "4"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("at least 5"), "{stderr}");
}

#[test]
fn explicit_system_drr_and_map_validation() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        &dir,
        "system.json",
        r#"{
            "blocks": [
                {"summands": [{"space": {"sphere_factors": 1}, "unit_rank": 1}]},
                {"summands": [{"space": {"sphere_factors": 2}, "unit_rank": 3}]}
            ],
            "maps": [{"targets": [[
                {"proj": {"source": 0, "embedding": {"block_offset": 0}}},
                {"proj": {"source": 0, "embedding": {"block_offset": 1}}},
                {"eval": {"source": 0, "point": "x0"}}
            ]]}]
        }"#,
    );
    let (code, stdout, _) = run(&["drr", &good]);
    assert_eq!(code, 0);
    let r = report(&stdout);
    assert_eq!(r["stage_ratios"][0], "2/1");
    assert_eq!(r["stage_ratios"][1], "4/3");
    assert_eq!(r["reported_limsup"], "2/1");
    let (code, stdout, _) = run(&["drr", &good, "--tail-from", "1"]);
    assert_eq!(code, 0);
    assert_eq!(report(&stdout)["reported_limsup"], "4/3");

    // Ranks must add up: two projections and an eval of a rank-1 source
    // cannot land in a rank-4 target.
    let bad = write(
        &dir,
        "bad.json",
        r#"{
            "blocks": [
                {"summands": [{"space": {"sphere_factors": 1}, "unit_rank": 1}]},
                {"summands": [{"space": {"sphere_factors": 2}, "unit_rank": 4}]}
            ],
            "maps": [{"targets": [[
                {"proj": {"source": 0, "embedding": {"block_offset": 0}}},
                {"proj": {"source": 0, "embedding": {"block_offset": 1}}},
                {"eval": {"source": 0, "point": "x0"}}
            ]]}]
        }"#,
    );
    let (code, _, stderr) = run(&["drr", &bad]);
    assert_eq!(code, 3);
    assert!(stderr.contains("rank"), "{stderr}");
}

#[test]
fn report_rationals_round_trip() {
    let (code, stdout, _) = run(&["construct", "--c", "7/3", "--stages", "5"]);
    assert_eq!(code, 0);
    let full: Value = serde_json::from_str(&stdout).unwrap();

    fn walk(v: &Value, seen: &mut usize) {
        match v {
            Value::String(s) if s.contains('/') => {
                let (n, d) = s.split_once('/').unwrap();
                let n: num_bigint::BigInt = n.parse().expect("numerator");
                let d: num_bigint::BigInt = d.parse().expect("denominator");
                let r = BigRational::new(n, d);
                assert_eq!(format!("{}/{}", r.numer(), r.denom()), *s, "not canonical");
                *seen += 1;
            }
            Value::Array(items) => items.iter().for_each(|v| walk(v, seen)),
            Value::Object(map) => map.values().for_each(|v| walk(v, seen)),
            _ => {}
        }
    }
    let mut seen = 0;
    walk(&full["report"], &mut seen);
    assert!(seen >= 10, "expected many rational fields, saw {seen}");
}
