use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commutant")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_the_state() {
    let o = run(&["eval", "C(theta_x, 1, theta_y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-4");
}

#[test]
fn ope_lists_singular_terms() {
    let o = run(&["ope", "theta_h", "theta_h", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = v["ope"].as_array().unwrap();
    assert!(terms.iter().any(|t| t["n"] == 1 && t["value"] == "-8"), "{v}");
}

#[test]
fn verify_json_has_report_shape() {
    let o = run(&["verify", "ope-currents", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["suite", "params", "cases", "pass", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["suite"], "ope-currents");
    assert_eq!(v["pass"], true);
    assert_eq!(v["params"]["algebra"], "sl2-adjoint");
    for c in v["cases"].as_array().unwrap() {
        for key in ["name", "expected", "actual", "pass"] {
            assert!(c.get(key).is_some(), "case missing {key}");
        }
    }
}

#[test]
fn flags_reach_the_params() {
    let o = run(&["verify", "virasoro", "--json", "--algebra", "abelian-2", "--seed", "7", "--max-degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["algebra"], "abelian-2");
    assert_eq!(v["params"]["seed"], 7);
    assert_eq!(v["params"]["max_degree"], 4);
    let e = run(&["verify", "virasoro", "--json", "--extended", "--level", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&e)).unwrap();
    assert_eq!(v["params"]["max_weight"], 4);
    assert_eq!(v["params"]["level"], 1);
}

#[test]
fn failing_suite_exits_one() {
    let o = run(&["verify", "gr-compat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "no-such-suite"],
        vec!["eval", "C(theta_x 1, theta_y)"],
        vec!["eval", "b[1,0]", "--algebra", "e8"],
        vec!["verify", "weyl", "--algebra", "abelian-3"],
        vec!["ope", "b[1,0]", "u[1,0]"],
        vec!["frobnicate"],
        vec!["verify", "weyl", "--level", "many"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_report_offset() {
    let o = run(&["eval", "C(theta_x 1, theta_y)"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("10"), "{err}");
}
