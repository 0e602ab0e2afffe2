use std::process::{Command, Output};

use serde_json::Value;

const PARAMS: &str = r#"{"k0":"1/3","k1":"2/5","kI":"3/7","t1":"5/11","t2":"7/13","a0":"11/17","s1":"2","s2":"3"}"#;

fn garnier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_garnier")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn figure1_passes_and_reports_the_alpha0_norm() {
    let out = garnier(&["verify", "--suite", "figure1", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    let norm = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "<alpha_0, alpha_0 check>").unwrap();
    assert_eq!(norm["actual"], "-5/2");
    assert_eq!(report["version"], "v0.1.0");
    assert_eq!(report["config"]["truncation"], 8);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify", "--suite", "figure1,theorem2,involutions,hamiltonian", "--seed", "7", "--output", "json", "--trials", "10"];
    let a = garnier(&args);
    let b = garnier(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sigma4_swaps_the_two_halves() {
    let out = garnier(&["apply", "--word", "s4", "--point", r#"["2","3","5","7"]"#, "--params", PARAMS]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["point"], serde_json::json!({ "q1": "3", "q2": "2", "r1": "7", "r2": "5" }));
    assert_eq!(v["params"]["s1"], "3");
    assert_eq!(v["params"]["s2"], "2");
}

#[test]
fn wt1_twice_is_the_identity() {
    let point = r#"{"q1":"2/3","q2":"-5","p1":"7/2","p2":"1/9"}"#;
    let out = garnier(&["apply", "--word", "wt1,wt1", "--coords", "qp", "--point", point, "--params", PARAMS]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let p: Value = serde_json::from_str(point).unwrap();
    let a: Value = serde_json::from_str(PARAMS).unwrap();
    assert_eq!(v["point"], p);
    assert_eq!(v["params"], a);
}

#[test]
fn wa0_on_its_polar_locus_is_a_structured_error() {
    // r1 + r2 + α0 = 0
    let point = r#"{"q1":"2","q2":"3","r1":"1","r2":"-28/17"}"#;
    let out = garnier(&["apply", "--word", "wt1,wa0", "--point", point, "--params", PARAMS]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["detail"]["kind"], "polar");
    assert_eq!(v["error"]["detail"]["generator"], "wa0");
    assert_eq!(v["error"]["detail"]["step"], 1);
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(garnier(&["act", "--word", "wk2"]).status.code(), Some(2));
    assert_eq!(garnier(&["act", "--word", "wa0", "--model", "X10"]).status.code(), Some(2));
    assert_eq!(garnier(&["verify", "--suite", "figure9"]).status.code(), Some(2));
    assert_eq!(garnier(&["verify", "--suite", "figure1", "--truncation", "0"]).status.code(), Some(2));
    assert_eq!(garnier(&["apply", "--word", "s1", "--point", "[1,2]", "--params", PARAMS]).status.code(), Some(2));
    let degenerate = PARAMS.replace(r#""s2":"3""#, r#""s2":"2""#);
    assert_eq!(garnier(&["apply", "--word", "s1", "--point", "[1,2,3,4]", "--params", &degenerate]).status.code(), Some(1));
}

#[test]
fn wt1_exchanges_e1_and_e2() {
    let out = garnier(&["act", "--word", "wt1", "--model", "X10"]);
    assert_eq!(out.status.code(), Some(0));
    let images = &json(&out)["map"]["images"];
    assert_eq!(images["E1"], "E2");
    assert_eq!(images["E2"], "E1");
    for l in ["Hq", "Hr", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10"] {
        assert_eq!(images[l], l);
    }
}

#[test]
fn t1_word_translates_roots_and_grows_quadratically() {
    let word = "wt2,wt1,wkI,wk0,wa0,wt2,wt1,wkI,wk0,wa0";
    let out = garnier(&["act", "--word", word, "--model", "X21", "--degrees", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["roots"]["translation_by_delta"], serde_json::json!(["-1", "2", "0", "0", "0", "0"]));
    let second = v["degree_sequence"]["second_differences"].as_array().unwrap();
    assert_eq!(second.len(), 3);
    assert!(second.iter().all(|x| x == &second[0] && x != "0"));
    // (α0, κ0) ↦ (α0 − d, κ0 + 2d) with d = 2α0 + κ0 + κ1 + κ∞ + θ1 + θ2
    assert_eq!(v["params"]["a0"], "-a0 - k0 - k1 - kI - t1 - t2");
    assert_eq!(v["params"]["k0"], "4*a0 + 3*k0 + 2*k1 + 2*kI + 2*t1 + 2*t2");
}
