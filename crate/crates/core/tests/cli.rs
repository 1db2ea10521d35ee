use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_inertia");

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("inertia-cli-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, v: &Value) -> String {
        let p = self.0.join(name);
        fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn run(args: &[&str]) -> (i32, Value, String) {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> (i32, Value, String) {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

fn terms(form: &Value) -> Vec<(Vec<u64>, String)> {
    let mut t: Vec<(Vec<u64>, String)> = form["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let e = t["exp"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (e, t["c"].as_str().unwrap().to_string())
        })
        .collect();
    t.sort();
    t
}

#[test]
fn sigma_worked_example() {
    let s = Scratch::new("sigma");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["0", "1", "0"]]));
    let (code, v, _) = run(&["sigma", "--curve", &curve, "--points", &pts]);
    assert_eq!(code, 0);
    let sig = &v["sigmas"][0];
    assert_eq!(sig["degree"], 3);
    assert_eq!(sig["involution"], true);
    assert_eq!(sig["fixes_curve"], true);
    let comps = sig["components"].as_array().unwrap();
    assert_eq!(terms(&comps[0]), vec![(vec![1, 1, 1], "1/1".to_string())]);
    assert_eq!(
        terms(&comps[1]),
        vec![(vec![1, 0, 2], "-1/1".to_string()), (vec![3, 0, 0], "1/1".to_string())]
    );
    assert_eq!(terms(&comps[2]), vec![(vec![0, 1, 2], "1/1".to_string())]);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn cusp_is_rejected_with_witness() {
    let s = Scratch::new("cusp");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3" }));
    let (code, v, _) = run(&["curve-check", "--curve", &curve]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "singular");
    assert_eq!(v["counterexample"]["witness"], json!(["0/1", "0/1", "1/1"]));
}

#[test]
fn abstract_certificate() {
    let (code, v, _) = run(&["certify", "--abstract", "--generators", "3", "--max-len", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "certified");
    assert_eq!(v["certificate"]["words_checked"], 1536);
    for key in ["config_hash", "generators", "omega", "succ", "max_len", "max_coeff_bits", "status"] {
        assert!(v["certificate"].get(key).is_some(), "{key}");
    }
}

#[test]
fn exact_certificate_is_deterministic() {
    let s = Scratch::new("exact");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["1", "1", "5"], ["1", "1", "23"], ["1", "12", "6"]]));
    let args = ["certify", "--field", "Fp:29", "--curve", &curve, "--points", &pts, "--max-len", "8"];
    let (code, v, first) = run(&args);
    assert_eq!(code, 0, "{first}");
    assert_eq!(v["certificate"]["words_checked"], 3 * 128);
    let (_, _, second) = run(&args);
    assert_eq!(first, second);
}

#[test]
fn recoverable_errors_exit_three() {
    let s = Scratch::new("recoverable");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["0", "0", "1"]]));
    let (code, v, _) = run(&["basepoints", "--curve", &curve, "--points", &pts]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "BasePointsNotRational");
    let (code, v, _) = run(&["certify", "--curve", &curve, "--points", &pts, "--max-len", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "QuarticNotSplit");
}

#[test]
fn malformed_input_exits_four() {
    let s = Scratch::new("malformed");
    let bad = s.0.join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    let bad = bad.to_str().unwrap();
    assert_eq!(run(&["curve-check", "--curve", bad]).0, 4);
    assert_eq!(run(&["curve-check", "--field", "Fp:4", "--curve", bad]).0, 4);
    assert_eq!(run(&["certify", "--no-such-flag"]).0, 4);
    assert_eq!(run(&["sigma"]).0, 4);
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["0", "1", "0"]]));
    assert_eq!(run(&["compose", "--curve", &curve, "--points", &pts, "--word", "0,5"]).0, 4);
}

#[test]
fn compose_files_and_verify_word() {
    let s = Scratch::new("compose");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["0", "1", "0"], ["1", "0", "1"]]));
    let (code, v, _) = run(&["compose", "--curve", &curve, "--points", &pts, "--word", "0"]);
    assert_eq!(code, 0);
    let map = s.file("m.json", &v["map"]);
    let (code, v, _) = run(&["compose", "--map", &map, "--map", &map]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 1);

    let (code, v, _) = run(&["verify", "--curve", &curve, "--points", &pts, "--word", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["fixes_curve"], true);
    assert_eq!(v["degree"], 7);
    assert_eq!(v["decomposition"]["violations"], json!([]));

    // A linear map that moves C is not in the inertia group.
    let swap = s.file(
        "swap.json",
        &json!({ "degree": 1, "components": [
            { "degree": 1, "terms": [{ "exp": [0, 1, 0], "c": "1" }] },
            { "degree": 1, "terms": [{ "exp": [1, 0, 0], "c": "1" }] },
            { "degree": 1, "terms": [{ "exp": [0, 0, 1], "c": "1" }] }
        ]}),
    );
    let (code, v, _) = run(&["verify", "--curve", &curve, "--map", &swap]);
    assert_eq!(code, 2, "{v}");
    assert_eq!(v["fixes_curve"], false);
}

#[test]
fn crosscheck_and_out_file() {
    let s = Scratch::new("cross");
    let curve = s.file("c.json", &json!({ "form": "y^2*z - x^3 + x*z^2" }));
    let pts = s.file("p.json", &json!([["0", "1", "0"], ["0", "0", "1"], ["1", "1", "5"]]));
    let out = s.0.join("report.json");
    let (code, _, stdout) = run(&[
        "degree-crosscheck",
        "--field",
        "Fp:29",
        "--curve",
        &curve,
        "--points",
        &pts,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let words = v["words"].as_array().unwrap();
    assert_eq!(words.len(), 3 + 6);
    assert!(words.iter().all(|w| w["agree"] == true));
    let oq = words.iter().find(|w| w["word"] == json!([0, 1])).unwrap();
    assert_eq!(oq["symbolic"], 7);
}

#[test]
fn config_from_stdin_matches_flags() {
    let cfg = json!({ "abstract": true, "generators": 2, "max_len": 4 }).to_string();
    let (code, a, _) = run_with_stdin(&["certify", "--config", "-"], Some(&cfg));
    assert_eq!(code, 0);
    let (_, b, _) = run(&["certify", "--abstract", "--generators", "2", "--max-len", "4"]);
    assert_eq!(a, b);
    let (code, _, _) = run_with_stdin(&["certify", "--config", "-"], Some(r#"{"bogus": 1}"#));
    assert_eq!(code, 4);
}
