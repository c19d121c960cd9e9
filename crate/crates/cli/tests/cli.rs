use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spbdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spbdiv"))
        .args(args)
        .env_remove("MAX_FORM_ORDER")
        .output()
        .unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = spbdiv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let path = std::env::temp_dir().join(format!("spbdiv-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

/// Exit code and the single stderr line of a failing run.
fn failure(args: &[&str], env: Option<(&str, &str)>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spbdiv"));
    cmd.args(args).env_remove("MAX_FORM_ORDER");
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(out.stdout.is_empty());
    (out.status.code().unwrap(), err.trim_end().to_string())
}

#[test]
fn type_counts() {
    assert_eq!(ok_json(&["types", "--N", "1", "--Nprime", "1"]), serde_json::json!({"count": 1}));
    assert_eq!(ok_json(&["types", "--N", "12", "--Nprime", "1"])["count"], 6);
    let listed = ok_json(&["types", "--N", "6", "--Nprime", "2", "--list"]);
    assert_eq!(listed["count"], listed["formula"]);
    assert_eq!(listed["types"].as_array().unwrap().len() as u64, listed["count"].as_u64().unwrap());
}

#[test]
fn special_divisor_round_trip() {
    let zh = spbdiv(&["zdiv", "--N", "2", "--Nprime", "1", "--H", "[[1,0,0,0]]"]);
    assert!(zh.status.success());
    let file = scratch("zh.json", &zh.stdout);
    let cert = ok_json(&["is-special", "--N", "2", "--Nprime", "1", "--file", file.to_str().unwrap()]);
    assert_eq!(cert["special"], true);
    assert_eq!(cert["invariant_vector"]["[1,0,0,0]"], "1/1");
    let again = ok_json(&["divisor", "is-special", "--N", "2", "--Nprime", "1", "--file", file.to_str().unwrap()]);
    assert_eq!(again, cert);
    std::fs::remove_file(file).unwrap();
}

#[test]
fn samples_follow_the_seed() {
    let args = |seed: &'static str, perturb: bool| {
        let mut a = vec!["divisor", "sample", "--N", "2", "--Nprime", "2", "--seed", seed];
        if perturb {
            a.push("--perturb");
        }
        a
    };
    assert_eq!(spbdiv(&args("7", false)).stdout, spbdiv(&args("7", false)).stdout);
    assert_ne!(spbdiv(&args("7", false)).stdout, spbdiv(&args("8", false)).stdout);
    for (perturb, special) in [(false, true), (true, false)] {
        let file = scratch(&format!("sample-{perturb}.json"), &spbdiv(&args("7", perturb)).stdout);
        let cert = ok_json(&["is-special", "--N", "2", "--Nprime", "2", "--file", file.to_str().unwrap()]);
        assert_eq!(cert["special"], special);
        std::fs::remove_file(file).unwrap();
    }
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["cusps", "--N", "6", "--Nprime", "2"],
        vec!["invariants", "--N", "4", "--Nprime", "2"],
        vec!["eta", "psi", "--N", "4", "--Nprime", "2", "--a", "1", "--c", "2", "--terms", "6"],
    ] {
        let first = spbdiv(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, spbdiv(&args).stdout);
    }
}

#[test]
fn invariants_and_relations() {
    let v = ok_json(&["invariants", "--N", "2", "--Nprime", "2"]);
    assert_eq!(v["dimension"], 5);
    assert_eq!(v["span_dimension"], 5);
    assert_eq!(v["relations"].as_array().unwrap().len(), 1);
    let r = ok_json(&["relations", "--p", "3", "--r", "2", "--rprime", "1"]);
    assert_eq!(r["kernel_dimension"], 1);
    assert_eq!(r["distinct_in_kernel"], true);
}

#[test]
fn eta_commands() {
    let prime = ok_json(&["eta", "identity", "--p", "3", "--r", "1", "--terms", "30"]);
    assert_eq!(prime["holds"], true);
    assert_eq!(prime["constant_matches"], true);
    let square = ok_json(&["eta", "identity", "--p", "2", "--r", "2", "--terms", "30"]);
    assert_eq!(square["holds"], false);
    let lifted = ok_json(&["eta", "identity", "--p", "2", "--r", "2", "--terms", "30", "--lifted"]);
    assert_eq!(lifted["holds"], true);
    let psi = ok_json(&["eta", "psi", "--N", "1", "--a", "1", "--c", "0", "--terms", "5"]);
    let terms = psi["z1"]["series"]["terms"].as_array().unwrap();
    assert_eq!(terms[0]["exp"], "1/24");
    assert_eq!(terms[1]["exp"], "25/24");
}

#[test]
fn boundary_orders() {
    let cv = ok_json(&["cross-validate", "--N", "2", "--Nprime", "2", "--H", "[[1,0,0,1],[0,1,1,0]]"]);
    assert_eq!(cv["constant"], "1/24");
    let printed = ok_json(&[
        "cross-validate",
        "--N",
        "2",
        "--Nprime",
        "1",
        "--H",
        "{\"generators\": [[1,0,0,0]]}",
        "--convention",
        "as-printed",
    ]);
    assert_eq!(printed["constant"], Value::Null);
    let weyl = ok_json(&["weyl", "--N", "2", "--Nprime", "1", "--H", "[[1,0,0,0]]", "--a", "1", "--c", "0"]);
    assert_eq!(weyl["rows"][0]["constant"], "1/12");
}

#[test]
fn error_paths() {
    let (code, line) = failure(&["types", "--N", "4", "--Nprime", "3"], None);
    assert_eq!(code, 2);
    assert!(line.starts_with("error: invalid-parameter: "), "{line}");
    let (code, line) = failure(&["types", "--N"], None);
    assert_eq!(code, 2);
    assert!(line.starts_with("error: usage: "), "{line}");
    let (code, line) = failure(&["frobnicate"], None);
    assert_eq!(code, 2);
    assert!(line.starts_with("error: usage: "), "{line}");
    let (code, line) = failure(&["cusps", "--N", "4", "--Nprime", "2"], Some(("MAX_FORM_ORDER", "10")));
    assert_eq!(code, 3);
    assert!(line.starts_with("error: guard-exceeded: "), "{line}");
    let (code, line) = failure(&["zdiv", "--N", "2", "--H", "[[1,1,0,0]]"], None);
    assert_eq!(code, 2);
    assert!(line.starts_with("error: not-self-dual-isotropic: "), "{line}");
    let (code, _) = failure(&["zdiv", "--N", "2", "--H", "not json"], None);
    assert_eq!(code, 2);
    let (code, _) = failure(&["is-special", "--N", "2", "--file", "/nonexistent/d.json"], None);
    assert_eq!(code, 2);
    let (code, _) = failure(&["eta", "identity", "--p", "17", "--r", "1"], None);
    assert_eq!(code, 3);
}
