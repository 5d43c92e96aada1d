use std::process::{Command, Output};

use hyperinv::localization::InductionTrace;

fn hyperinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperinv")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hyperinv(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut args = args.to_vec();
    args.push("--json");
    serde_json::from_str(&stdout(&args)).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = hyperinv(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn ring_so3_lists_torsion_tau() {
    let text = stdout(&["ring", "--group", "SO3", "--space", "point", "--coeff", "H2"]);
    assert!(text.contains("variables: c₂ (2,0), c₃ (3,0)"), "{text}");
    assert!(text.contains("τ₁,₁ (1,1) torsion 2"), "{text}");
    assert!(text.contains("w₂ (0,2)"));
}

#[test]
fn ring_gl3_is_polynomial_in_chern_classes() {
    let text = stdout(&["ring", "--group", "GLn:3", "--space", "point", "--coeff", "K"]);
    assert!(text.contains("characteristic: 0"));
    assert!(text.contains("variables: c₁ (1,0), c₂ (2,0), c₃ (3,0)"));
    assert!(text.contains("relations: none"));
}

#[test]
fn ring_pgl2_on_line() {
    let text = stdout(&["ring", "--group", "PGL2", "--space", "P1", "--coeff", "H2"]);
    assert!(text.contains("relations: t^2 + c₂; c₃"), "{text}");
    assert!(text.contains("kernel: w₂, c₃, τ"));
    let ascii = stdout(&["ring", "--group", "PGL2", "--space", "P1", "--coeff", "H2", "--ascii"]);
    assert!(ascii.is_ascii());
    assert!(ascii.contains("relations: t^2 + c2; c3"));
    assert!(ascii.contains("kernel: w2, c3, tau"));
}

#[test]
fn ring_json_matches_text() {
    let args = ["ring", "--group", "O3", "--space", "point", "--coeff", "K"];
    let v = json(&args);
    let text = stdout(&[&args[..], &["--ascii"]].concat());
    assert_eq!(v["characteristic"], 0);
    assert_eq!(v["relations"], serde_json::json!(["2*c1", "2*c3"]));
    assert!(text.contains("relations: 2*c1; 2*c3"), "{text}");
    for g in v["generators"].as_array().unwrap() {
        let line = format!("  {} ({},{})", g["name"].as_str().unwrap(), g["codim"], g["degree"]);
        assert!(text.contains(&line), "{line} missing from {text}");
        if let Some(t) = g["torsion"].as_u64() {
            assert!(text.contains(&format!("{line} torsion {t}")));
        }
    }
}

#[test]
fn ring_unknown_key_exits_2() {
    let err = fails(&["ring", "--group", "SO3", "--space", "P1", "--coeff", "K"]);
    assert!(err.contains("not in catalog"), "{err}");
    fails(&["ring", "--group", "foo", "--space", "point", "--coeff", "K"]);
}

#[test]
fn disc_default_primes() {
    assert_eq!(stdout(&["disc", "3"]), "10t + 30λ₁; divisible: 2,5; not: 3,7\n");
    assert!(stdout(&["disc", "1"]).starts_with("2t + 2λ₁"));
    assert_eq!(stdout(&["disc", "3", "--ascii"]), "10*t + 30*l1; divisible: 2,5; not: 3,7\n");
}

#[test]
fn disc_single_prime() {
    let text = stdout(&["disc", "2", "--prime", "3"]);
    assert!(text.contains("divisible: 3"), "{text}");
    assert!(!text.contains("not:"));
}

#[test]
fn disc_json() {
    let v = json(&["disc", "3"]);
    assert_eq!(v["class"], "10*t + 30*l1");
    assert_eq!(v["divisible"], serde_json::json!([2, 5]));
    assert_eq!(v["not_divisible"], serde_json::json!([3, 7]));
}

#[test]
fn disc_zero_is_usage_error() {
    fails(&["disc", "0"]);
    fails(&["disc", "3", "--prime", "4"]);
}

#[test]
fn gate_verdicts() {
    assert!(stdout(&["gate", "4"]).contains("kills: yes"));
    assert!(stdout(&["gate", "10"]).contains("kills: no"));
    let v = json(&["gate", "8"]);
    assert_eq!(v["kills"], true);
    fails(&["gate", "3"]);
}

#[test]
fn invariants_genus_two() {
    let text = stdout(&["invariants", "--g", "2", "--p", "2"]);
    assert!(text.contains("degrees 0,1,2,3,4"), "{text}");
    assert!(text.contains("x₁·x₂ ∈ {0, x₃}"));
}

#[test]
fn invariants_genus_three() {
    assert!(stdout(&["invariants", "--g", "3", "--p", "7"]).contains("degrees 0,1\n"));
    assert!(stdout(&["invariants", "--g", "3", "--p", "3"]).contains("trivial"));
    assert!(stdout(&["invariants", "--g", "3", "--p", "2"]).contains("degrees 0,1,2,2,3,4,5"));
}

#[test]
fn invariants_json_matches_text() {
    let v = json(&["invariants", "--g", "3", "--p", "2", "--mode", "general"]);
    let text = stdout(&["invariants", "--g", "3", "--p", "2", "--mode", "general", "--ascii"]);
    let degrees: Vec<String> = v["generators"].as_array().unwrap().iter().map(|g| g["degree"].to_string()).collect();
    let k = &v["undetermined"];
    let line = format!("degrees {} + {}[{}]", degrees.join(","), k["name"].as_str().unwrap(), k["degree"]);
    assert!(text.contains(&line), "{line} / {text}");
}

#[test]
fn invariants_out_of_scope_exits_2() {
    let err = fails(&["invariants", "--g", "5", "--p", "2"]);
    assert!(err.contains("out of validated scope"), "{err}");
    fails(&["invariants", "--g", "3", "--p", "4"]);
    fails(&["invariants", "--g", "3"]);
}

#[test]
fn trace_prints_and_replays() {
    let text = stdout(&["trace", "--g", "2", "--p", "2"]);
    assert!(text.contains("R_PUSH_EVEN"));
    assert!(text.contains("replay: ok, "));
    assert!(text.ends_with("result: degrees 0,1,2,3,4\n"));
    let text = stdout(&["trace", "--n", "8", "--group", "PGL2", "--p", "2"]);
    assert!(text.contains("R_GATE"));
}

#[test]
fn trace_file_round_trip() {
    let raw = stdout(&["trace", "--g", "3", "--p", "2", "--json"]);
    let trace: InductionTrace = serde_json::from_str(&raw).unwrap();
    assert_eq!(trace.replay().unwrap().degrees(), vec![0, 1, 2, 2, 3, 4, 5]);

    let dir = std::env::temp_dir().join(format!("hyperinv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, &raw).unwrap();
    assert!(stdout(&["trace", "--replay", good.to_str().unwrap()]).contains("replay: ok, 48 steps"));

    let bad = dir.join("bad.json");
    std::fs::write(&bad, raw.replacen("\"x1\"", "\"x9\"", 1)).unwrap();
    let err = fails(&["trace", "--replay", bad.to_str().unwrap()]);
    assert!(err.contains("replay mismatch"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ascii_flag_removes_unicode_everywhere() {
    for args in [
        &["trace", "--g", "3", "--p", "2", "--ascii"][..],
        &["invariants", "--g", "2", "--p", "2", "--ascii"],
        &["ring", "--group", "SO3", "--space", "point", "--coeff", "H2", "--ascii"],
        &["gate", "10", "--ascii"],
    ] {
        let text = stdout(args);
        assert!(text.is_ascii(), "{args:?}: {text}");
    }
}
