use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fujita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fujita")).args(args).output().expect("binary runs")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--structured"];
    argv.extend_from_slice(args);
    let out = fujita(&argv);
    let json = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), json)
}

fn temp_descriptor(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const CURVE_2_MINUS_1: &str = r#"
[base]
kind = "curve"
genus = 2

[bundle]
rank = 2
c1 = [-1]
curve_semistable = true
"#;

#[test]
fn confn_cites_the_deciding_rule() {
    let path = fixture("curve_g2_r2_d3.toml");
    let (code, json) = structured(&["confn", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["exact"], 3);
    assert_eq!(json["citations"][0], "curve.degree-one-mod-rank");
    assert_eq!(json["witness"]["kind"], "base_point_adjoint");
    assert_eq!(json["witness"]["pushforward_slope"][0]["num"], 1);
}

#[test]
fn confn_interval_lists_open_hypotheses() {
    let path = fixture("abelian_open.toml");
    let (code, json) = structured(&["confn", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(json["outcome"]["lower"], 3);
    assert_eq!(json["outcome"]["upper"], 4);
    assert_eq!(json["outcome"]["unresolved"], serde_json::json!(["all_ample_gg", "exists_non_gg_ample_twist"]));
}

#[test]
fn malformed_hn_reports_the_field() {
    let out = fujita(&["confn", fixture("invalid/hn_not_decreasing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bundle.hn") && err.contains("strictly decreasing"), "{err}");
}

#[test]
fn cone_test_examples() {
    let f = temp_descriptor(CURVE_2_MINUS_1);
    let p = f.path().to_str().unwrap();
    let (code, json) = structured(&["cone-test", p, "--m", "2", "--a", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["ample_curve"], true);
    assert_eq!(json["outcome"]["ample_csst"], true);
    let (_, json) = structured(&["cone-test", p, "--m", "5", "--a", "-1"]);
    assert_eq!(json["outcome"]["nef_csst"], false);
    assert_eq!(json["outcome"]["nef_curve"], false);
    let (_, json) = structured(&["cone-test", p, "--lambda"]);
    assert_eq!(json["outcome"]["nef_csst"], true);
    assert_eq!(json["outcome"]["ample_csst"], false);
    assert_eq!(json["outcome"]["product_image"]["x"][0]["num"], 0);
}

#[test]
fn cone_test_needs_an_applicable_criterion() {
    let text = r#"
[base]
kind = "generic_polarized"
canonical_class = [0, 0]

[base.ns]
rank = 2
nef_facets = [[1, 0], [0, 1]]

[bundle]
rank = 2
c1 = [1, 1]
curve_semistable = false
"#;
    let f = temp_descriptor(text);
    let out = fujita(&["cone-test", f.path().to_str().unwrap(), "--m", "1,1", "--a", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("curve semistable"));
}

#[test]
fn pushforward_reports_the_critical_case() {
    let (code, json) = structured(&["pushforward", fixture("curve_critical_twists.toml").to_str().unwrap()]);
    assert_eq!(code, 2);
    let outcome = &json["outcome"];
    assert_eq!(outcome["slope_criterion"], "inconclusive");
    assert_eq!(outcome["critical"]["verdict"], "critical");
    assert_eq!(outcome["critical"]["theta"][0]["num"], 1);

    let (code, json) = structured(&["pushforward", fixture("curve_unstable_twists.toml").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["mu_minus"]["num"], 4);
    assert_eq!(json["outcome"]["slope_criterion"], "globally_generated");
}

#[test]
fn partition_command() {
    let (code, json) = structured(&["partition", "1,2,3", "-r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["indices"], serde_json::json!([0, 1]));
    let (code, json) = structured(&["partition", "1,1,1", "-r", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["indices"], Value::Null);
    assert_eq!(json["outcome"]["decided"], true);
}

#[test]
fn witness_command() {
    let (code, json) = structured(&["witness", fixture("curve_g2_r2_d3.toml").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["lower"]["fiber_degree"], -1);
    assert_eq!(json["outcome"]["upper"]["adjoint_class"]["a"]["num"], 0);
    let out = fujita(&["witness", fixture("curve_g2_r2_d4.toml").to_str().unwrap(), "--kind", "upper"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_suites_and_caps() {
    let (code, json) = structured(&["verify", "--suite", "cones", "--bound", "5"]);
    assert_eq!(code, 0);
    assert_eq!(json["outcome"]["passed"], true);
    let out = fujita(&["verify", "--suite", "partition", "--bound", "21"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size cap"));
    assert_eq!(fujita(&["verify", "--suite", "everything"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(fujita(&["confn"]).status.code(), Some(1));
    assert_eq!(fujita(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fujita(&["--help"]).status.code(), Some(0));
}

#[test]
fn structured_output_has_no_decimals() {
    for name in ["curve_g2_r2_d3.toml", "abelian_surface_twists.toml", "picard_type_non_gg_twists.toml"] {
        let path = fixture(name);
        for cmd in ["confn", "pushforward", "witness"] {
            let out = fujita(&["--structured", cmd, path.to_str().unwrap()]);
            let text = String::from_utf8_lossy(&out.stdout);
            let v: Value = serde_json::from_str(&text).unwrap();
            assert!(!has_float(&v), "{cmd} {name}: {text}");
        }
    }
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_f64(),
        Value::Array(xs) => xs.iter().any(has_float),
        Value::Object(m) => m.values().any(has_float),
        _ => false,
    }
}

#[test]
fn overflow_is_an_error_not_a_wrong_answer() {
    let f = temp_descriptor("[base]\nkind = \"curve\"\ngenus = 2\n\n[bundle]\nrank = 3\nc1 = [9223372036854775801]\ncurve_semistable = true\n");
    let out = fujita(&["cone-test", f.path().to_str().unwrap(), "--m", "9223372036854775000", "--a", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("overflow"));
}
