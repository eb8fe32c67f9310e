use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quathyp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON value")
}

fn stream(bytes: &[u8]) -> Vec<Value> {
    serde_json::Deserializer::from_slice(bytes).into_iter::<Value>().map(Result::unwrap).collect()
}

const IDENTITY: &str = r#"{"field":"H","model":"ball","matrix":[[1,0,0],[0,1,0],[0,0,1]]}"#;
const DIAG: &str = r#"{"field":"H","model":"siegel","matrix":[[2,0,0],[0,"1/2",0],[0,0,1]]}"#;
const DIAG_NEG: &str = r#"{"field":"H","model":"siegel","matrix":[[2,0,0],[0,0.5,0],[0,0,-1]]}"#;

#[test]
fn identity_report() {
    let v = ok_json(&["classify"], IDENTITY);
    assert_eq!(v["type"], "SimpleElliptic");
    assert_eq!(v["type_name"], "simple elliptic (identity)");
    let inv = &v["invariants"];
    assert_eq!((inv["a"].as_f64(), inv["b"].as_f64(), inv["c"].as_f64()), (Some(6.0), Some(15.0), Some(20.0)));
    assert_eq!(v["tolerance"]["membership"].as_f64(), Some(1e-9));
}

#[test]
fn strictly_hyperbolic_diagonal() {
    let v = ok_json(&["classify"], DIAG);
    assert_eq!(v["type"], "StrictlyHyperbolic");
    assert_eq!(v["invariants"]["Delta"].as_f64(), Some(0.0));
    assert_eq!(v["invariants"]["G"].as_f64(), Some(0.25));
}

#[test]
fn flags_add_sections() {
    let v = ok_json(&["classify", "--oracle", "--literal", "--exact"], DIAG_NEG);
    assert_eq!(v["type"], "StrictlyHyperbolic");
    assert_eq!(v["oracle"]["type"], "StrictlyHyperbolic");
    assert_eq!(v["oracle"]["agrees"], true);
    assert_ne!(v["literal"], "HyperbolicBranch");
    assert_eq!(v["exact"]["a"], "3");
    assert_eq!(v["exact"]["b"], "-3/4");
    assert_eq!(v["exact"]["c"], "-13/2");
    assert_eq!(v["exact"]["resultant_plus_8g"], "0");
}

#[test]
fn global_flags_fill_missing_fields() {
    let doc = r#"{"matrix":[[1,0,0],[0,1,0],[0,0,1]]}"#;
    let v = ok_json(&["classify", "--field", "C", "--model", "siegel"], doc);
    assert_eq!(v["field"], "C");
    assert_eq!(v["model"], "siegel");
    assert_eq!(v["complex_type"], "Identity");
    let v = ok_json(&["--tol", "1e-6", "invariants"], IDENTITY);
    assert_eq!(v["tolerance"]["rank"].as_f64(), Some(1e-6));
}

#[test]
fn exit_codes() {
    let non_member = r#"{"field":"H","model":"ball","matrix":[[2,0,0],[0,1,0],[0,0,1]]}"#;
    let out = run(&["classify"], non_member);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("residual"));
    assert_eq!(run(&["check-membership"], non_member).status.code(), Some(3));

    assert_eq!(run(&["classify"], "{not json").status.code(), Some(2));
    assert_eq!(run(&["classify"], r#"{"field":"H","model":"ball","matrix":[[1,0],[0,1]]}"#).status.code(), Some(2));
    let complex_with_k = r#"{"field":"C","model":"ball","matrix":[["k",0,0],[0,1,0],[0,0,1]]}"#;
    assert_eq!(run(&["classify"], complex_with_k).status.code(), Some(2));
    assert_eq!(run(&["sample", "no-such-type"], "").status.code(), Some(2));

    // r close to 1 puts the double root of the cubic near ±2
    let near = r#"{"field":"H","model":"siegel","matrix":[[1.001,0,0],[0,0.999000999000999,0],[0,0,[0.5403023058681398,0.8414709848078965]]]}"#;
    assert_eq!(run(&["classify"], near).status.code(), Some(4));
    let v = ok_json(&["classify", "--allow-borderline"], near);
    assert_eq!(v["borderline"], true);
    assert!(!v["alternatives"].as_array().unwrap().is_empty());
}

#[test]
fn membership_check() {
    let v = ok_json(&["check-membership"], IDENTITY);
    assert_eq!(v["member"], true);
    assert_eq!(v["residual"].as_f64(), Some(0.0));
    let v = ok_json(&["check-membership", "--exact"], DIAG);
    assert_eq!(v["member"], true);
    // 0.1 is not exactly representable, and 1/0.1 is not its inverse in ℚ
    let approx = r#"{"field":"H","model":"siegel","matrix":[[10,0,0],[0,0.1,0],[0,0,1]]}"#;
    assert_eq!(ok_json(&["check-membership"], approx)["member"], true);
    assert_eq!(ok_json(&["check-membership", "--exact"], approx)["member"], true);
    let off = r#"{"field":"H","model":"siegel","matrix":[[3,0,0],[0,0.3333333333333333,0],[0,0,1]]}"#;
    assert_eq!(run(&["check-membership", "--exact"], off).status.code(), Some(3));
}

#[test]
fn sampled_documents_classify_to_their_label() {
    let out = run(&["sample", "regular-elliptic", "--count", "3", "--seed", "1"], "");
    assert_eq!(out.status.code(), Some(0));
    let docs = stream(&out.stdout);
    assert_eq!(docs.len(), 3);
    let reports = run(&["classify"], &String::from_utf8(out.stdout).unwrap());
    assert_eq!(reports.status.code(), Some(0));
    for r in stream(&reports.stdout) {
        assert_eq!(r["type"], "RegularElliptic");
        assert_eq!(r["label"], "RegularElliptic");
    }
}

#[test]
fn sampled_vertical_translation_is_unipotent() {
    let out = run(&["sample", "vertical-heisenberg-translation"], "");
    let v = ok_json(&["invariants"], &String::from_utf8(out.stdout).unwrap());
    for (k, want) in [("a", 6.0), ("b", 15.0), ("c", 20.0)] {
        assert!((v["invariants"][k].as_f64().unwrap() - want).abs() < 1e-9);
    }
}

#[test]
fn deterministic_output() {
    let a = run(&["sample", "screw-parabolic", "--count", "2", "--seed", "9"], "");
    let b = run(&["sample", "screw-parabolic", "--count", "2", "--seed", "9"], "");
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sample", "screw-parabolic", "--count", "2", "--seed", "10"], "");
    assert_ne!(a.stdout, c.stdout);
    let input = String::from_utf8(a.stdout).unwrap();
    assert_eq!(run(&["classify"], &input).stdout, run(&["classify"], &input).stdout);
}

#[test]
fn zclasses_round_trip() {
    for (field, count) in [("H", 27), ("C", 11)] {
        let v = ok_json(&["zclasses", "--field", field], "");
        let entries = v["zclasses"].as_array().unwrap();
        assert_eq!(entries.len(), count);
        assert_eq!(v["count"].as_u64(), Some(count as u64));
        for e in entries {
            let doc = serde_json::to_string(&e["representative"]).unwrap();
            let z = ok_json(&["zclass"], &doc);
            assert_eq!(z["zclass"]["case_id"], e["case_id"], "{field}");
            assert_eq!(z["zclass"]["family"], e["family"]);
            assert_eq!(z["type"], e["type"]);
        }
    }
}

#[test]
fn normal_form_residual() {
    let out = run(&["sample", "elliptoparabolic", "--seed", "4"], "");
    let v = ok_json(&["normal-form"], &String::from_utf8(out.stdout).unwrap());
    assert_eq!(v["type"], "ElliptoParabolic");
    assert_eq!(v["normal_form"]["kind"], "parabolic");
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn floats_have_seventeen_digits() {
    let out = run(&["classify"], DIAG);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"G\": 0.25000000000000000"), "{text}");
}
