use std::process::{Command, Output};

use serde_json::Value;

fn kothe(args: &[&str], horizon: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kothe"));
    cmd.args(args);
    match horizon {
        Some(h) => cmd.env("KOTHE_HORIZON", h),
        None => cmd.env_remove("KOTHE_HORIZON"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn horizon_comes_from_environment() {
    let out = kothe(&["certify", "lbai", "--family", r#"["cex:1"]"#, "--test", "[]", "--eps", "0"], Some("250"));
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["horizon"], 250);
    assert_eq!(v["result"]["certificate"]["horizon"], 250);

    let out = kothe(&["certify", "lbai", "--family", r#"["cex:1"]"#, "--test", "[]", "--eps", "0"], None);
    assert_eq!(json(&out)["horizon"], 10_000);

    let out = kothe(&["cex", "phi", "--i", "1", "--j", "1"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_written_to_output_file() {
    let dir = std::env::temp_dir().join(format!("kothe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bound.json");
    let out = kothe(
        &["lp-bound", "--delta", "2", "--diagonal", "10", "--kmax", "4", "--output", path.to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    let file = std::fs::read(&path).unwrap();
    assert_eq!(file, out.stdout);
    let v: Value = serde_json::from_slice(&file).unwrap();
    assert_eq!(v["result"]["value"], "10/1");
    assert_eq!(v["result"]["closed_form"], "10/1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_and_refusals_have_distinct_codes() {
    let out = kothe(&["norm", "--a", r#"[[1,"1/0"]]"#, "--weight", "const:1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero denominator"));

    let out = kothe(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = kothe(
        &[
            "certify", "ai", "--family", r#"["index"]"#, "--test", r#"[[40,"1/1"]]"#,
            "--eps", "0", "--window", "0",
        ],
        None,
    );
    assert!(out.status.success());

    let out = kothe(
        &[
            "certify", "bai", "--family", r#"["cex:1","cex:2"]"#, "--test", r#"[[3,"1/1"]]"#, "--eps", "0",
            "--bounds", r#"{"cex:1":"1","cex:2":"1"}"#, "--window", "50",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reproduce_report_shape() {
    let out = kothe(&["reproduce-counterexample", "--kmax", "3", "--dmax", "7", "--count", "5"], Some("2000"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let r = &v["result"];
    assert_eq!(r["passed"], true);
    assert_eq!(r["conclusion"]["has_locally_bounded_ai"], true);
    assert_eq!(r["conclusion"]["bounded_ai_excluded"], true);
    assert_eq!(r["norm_growth_is_d_minus_one"], true);
    let bounds: Vec<&str> = r["locally_bounded_ai"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["bound"].as_str().unwrap())
        .collect();
    assert_eq!(bounds, ["2/1", "3/1", "4/1"]);
    assert_eq!(r["common_subsequence_attempt"]["certified"], false);
    assert!(r["phi_convention"].as_str().unwrap().contains("increasing i"));
}
