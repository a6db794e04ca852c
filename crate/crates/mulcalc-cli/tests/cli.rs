//! End-to-end tests of the `mulcalc` binary: flag handling, output formats,
//! exit codes and determinism.

use std::io::Write;
use std::process::{Command, Output};

fn mulcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mulcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn unit_circle_file() -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"segments":[{{"kind":"arc","center":[0,0],"radius":1,"theta":[-3.141592653589793,3.141592653589793]}}]}}"#
    )
    .unwrap();
    file
}

#[test]
fn star_deriv_prints_fifteen_digit_value() {
    let out = mulcalc(&["star-deriv", "--f", "z", "--z", "2+0i"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 1.64872127070013 + 0i"), "{text}");
    assert!(text.contains("logderiv: 0.5"), "{text}");
}

#[test]
fn star_deriv_n_matches_known_value() {
    let out = mulcalc(&["star-deriv-n", "--f", "z", "--z", "1+0i", "--n", "2"]);
    assert!(out.status.success());
    // e^{-1} = 0.367879441171442
    assert!(stdout(&out).contains("0.367879441171442"), "{}", stdout(&out));
}

#[test]
fn parameters_bind_into_expressions() {
    let out = mulcalc(&[
        "star-deriv",
        "--f",
        "exp(c*z)",
        "--z",
        "0+0i",
        "--param",
        "c=1+1i",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("value: 1.4686"), "{text}");
    assert!(text.contains("i"), "{text}");
}

#[test]
fn complex_int_reports_branch_family() {
    let curve = unit_circle_file();
    let out = mulcalc(&[
        "complex-int",
        "--f",
        "exp(1/z)",
        "--curve",
        curve.path().to_str().unwrap(),
        "--branches",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("I*[-2]:"), "{text}");
    assert!(text.contains("I*[2]:"), "{text}");
    assert!(text.contains("single_valued: true"), "{text}");
    assert!(text.contains("winding:"), "{text}");
    assert!(text.contains("pieces:"), "{text}");
}

#[test]
fn json_output_is_schema_stable_and_deterministic() {
    let args = [
        "complex-int",
        "--f",
        "exp(z)",
        "--curve",
        r#"{"segments":[{"kind":"line","from":[0,0],"to":[1,0.5]}]}"#,
        "--format",
        "json",
    ];
    let first = mulcalc(&args);
    let second = mulcalc(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");

    let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(parsed["format_version"], 1);
    assert_eq!(parsed["command"], "complex-int");
    assert!(parsed["inputs_digest"].is_string());
    let base = &parsed["results"]["base"];
    assert!(base["re"].is_f64() && base["im"].is_f64(), "{base}");
}

#[test]
fn verify_ftc_passes_and_reports_branch() {
    let out = mulcalc(&[
        "verify",
        "ftc",
        "--f",
        "exp(c*z)",
        "--param",
        "c=1+1i",
        "--curve",
        r#"{"segments":[{"kind":"line","from":[0,0],"to":[1,1]}]}"#,
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("matched_branch:"), "{text}");
    assert!(text.contains("passed: true"), "{text}");
}

#[test]
fn verification_failure_exits_one() {
    // a broken identity: closed check on an open curve is a usage error,
    // so instead force a fail via cr-check on conj(z)
    let out = mulcalc(&["cr-check", "--f", "conj(z)", "--z", "1+1i"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("passed: false"));
}

#[test]
fn usage_errors_exit_two() {
    // malformed expression
    let out = mulcalc(&["star-deriv", "--f", "exp(", "--z", "1+0i"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("syntax error"), "{err}");

    // malformed curve JSON
    let out = mulcalc(&[
        "complex-int",
        "--f",
        "z",
        "--curve",
        r#"{"segments":[{"kind":"blob"}]}"#,
    ]);
    assert_eq!(out.status.code(), Some(2));

    // missing curve file
    let out = mulcalc(&["complex-int", "--f", "z", "--curve", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown flag (clap reports usage errors as 2)
    let out = mulcalc(&["star-deriv", "--nope", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown suite
    let out = mulcalc(&["verify", "all", "--suite", "unknown"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_three() {
    // zero of f at the evaluation point
    let out = mulcalc(&["star-deriv", "--f", "z", "--z", "0+0i"]);
    assert_eq!(out.status.code(), Some(3));

    // zero on the integration curve
    let curve = unit_circle_file();
    let out = mulcalc(&[
        "complex-int",
        "--f",
        "z-1",
        "--curve",
        curve.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("zero on curve"), "{err}");
}

#[test]
fn line_and_double_integrals_run() {
    let out = mulcalc(&[
        "line-int",
        "--f",
        "exp(x)",
        "--curve",
        r#"{"segments":[{"kind":"line","from":[0,0],"to":[1,0]}]}"#,
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ds: 1.64872127070013"), "{text}");
    assert!(text.contains("dx: 1.64872127070013"), "{text}");
    assert!(text.contains("dy: 1"), "{text}");

    let out = mulcalc(&["double-int", "--f", "exp(x*y)", "--rect", "0,1,0,1"]);
    assert!(out.status.success());
    // e^{1/4} = 1.28402541668774
    assert!(stdout(&out).contains("1.2840254166877"), "{}", stdout(&out));
}

#[test]
fn dump_samples_writes_csv() {
    let curve = unit_circle_file();
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("samples.csv");
    let out = mulcalc(&[
        "complex-int",
        "--f",
        "exp(1/z)",
        "--curve",
        curve.path().to_str().unwrap(),
        "--dump-samples",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,z_re,z_im,logf_re,logf_im"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() >= 32, "expected a dense dump, got {}", rows.len());
    for row in rows {
        assert_eq!(row.split(',').count(), 5);
    }
}

#[test]
fn anchor_offset_shifts_branch() {
    let segment = r#"{"segments":[{"kind":"line","from":[0,0],"to":[0.5,0]}]}"#;
    let base = mulcalc(&["complex-int", "--f", "e", "--curve", segment, "--format", "json"]);
    let shifted = mulcalc(&[
        "complex-int",
        "--f",
        "e",
        "--curve",
        segment,
        "--anchor-offset",
        "1",
        "--format",
        "json",
    ]);
    assert!(base.status.success() && shifted.status.success());
    let base_json: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
    let shifted_json: serde_json::Value = serde_json::from_slice(&shifted.stdout).unwrap();
    // shifting the anchor by one sheet multiplies the base by W = -1
    let b = base_json["results"]["base"]["re"].as_f64().unwrap();
    let s = shifted_json["results"]["base"]["re"].as_f64().unwrap();
    assert!((b + s).abs() < 1e-9, "{b} vs {s}");
}

#[test]
fn verify_subcommands_pass_on_known_identities() {
    let circle = r#"{"segments":[{"kind":"arc","center":[0,0],"radius":1,"theta":[-3.141592653589793,3.141592653589793]}]}"#;
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "closed", "--f", "z", "--curve", circle],
        vec!["verify", "concat", "--f", "exp(1/z)", "--curve", circle],
        vec!["verify", "reverse", "--f", "exp(1/z)", "--curve", circle],
        vec![
            "verify", "power", "--f", "z", "--n", "2", "--curve",
            r#"{"segments":[{"kind":"arc","center":[0,0],"radius":1,"theta":[0,1.5707963267948966]}]}"#,
        ],
        vec![
            "verify", "product", "--f", "exp(z)", "--g", "exp(-z)", "--curve",
            r#"{"segments":[{"kind":"line","from":[0,0],"to":[1,1]}]}"#,
        ],
        vec![
            "verify", "ftc-line", "--f", "exp(x*y)", "--curve",
            r#"{"segments":[{"kind":"line","from":[0,0],"to":[1,1]}]}"#,
        ],
        vec![
            "verify", "green", "--f", "1", "--g", "exp(x)", "--rect", "0,1,0,1",
        ],
    ];
    for args in cases {
        let out = mulcalc(&args);
        assert!(
            out.status.success(),
            "{args:?}: exit {:?}\n{}\n{}",
            out.status.code(),
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).contains("passed: true"), "{args:?}");
    }
}
