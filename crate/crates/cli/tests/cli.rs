use std::path::PathBuf;
use std::process::{Command, Output};

use rosen_core::rosen::ExpansionJson;
use rosen_core::{field_new, ExpansionResult, ExpansionStatus};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosen-lab")).args(args).output().expect("spawn rosen-lab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).expect("valid JSON");
    assert_eq!(v["schema"], "rosen-lab/v1");
    v
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rosen-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn expand_half_is_periodic() {
    let o = run(&["expand", "-m", "4", "1/2"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("status: Periodic(1,2)"), "{s}");
    assert!(s.contains("quotients: +1:1,+1:1,+1:2,"), "{s}");
}

#[test]
fn expand_zero_is_empty() {
    let o = run(&["expand", "-m", "4", "0"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("status: Finite") && s.contains("quotients: (empty)"), "{s}");
}

#[test]
fn expand_json_round_trips() {
    let o = run(&["expand", "-m", "5", "2/7", "--format", "json", "-n", "12"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let e: ExpansionJson = serde_json::from_value(v["expansion"].clone()).unwrap();
    let field = field_new(5).unwrap();
    let back = ExpansionResult::from_json(&field, &e).unwrap();
    assert_eq!(serde_json::to_value(back.to_json(5)).unwrap(), v["expansion"]);
    assert_eq!(v["convergents"].as_array().unwrap().len(), back.prefix(12).len() + 1);
}

#[test]
fn certified_real_mode() {
    let o = run(&["expand", "-m", "4", "--real", "0.3333333333333333333333", "-n", "20"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("status: Truncated"), "{s}");
    assert!(s.contains("certified: all 20 letters"), "{s}");

    // Low precision cannot certify all letters; the run still succeeds and says why it stopped.
    let o = run(&["expand", "-m", "5", "--real", "0.1234567", "-n", "200", "--precision", "32", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_ne!(v["certified_stop"], "max_steps");
    assert!(v["expansion"]["quotients"].as_str().unwrap().split(',').count() < 200);
}

#[test]
fn out_of_interval_needs_reduce() {
    let o = run(&["expand", "-m", "4", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--reduce"));
    let o = run(&["expand", "-m", "4", "2", "--reduce"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("shifted by"));
}

#[test]
fn growth_table_csv() {
    let o = run(&["expand", "-m", "4", "2/5", "-n", "6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,q_n,q_n^{1/n},loglog q_n/n"));
    assert!(lines.count() >= 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["expand", "1/2"])), 2);
    assert_eq!(code(&run(&["expand", "-m", "2", "1/2"])), 2);
    assert_eq!(code(&run(&["expand", "-m", "4", "--precision", "16", "1/2"])), 2);
    assert_eq!(code(&run(&["expand", "-m", "4", "1/+"])), 2);
    assert_eq!(code(&run(&["verify", "-m", "4", "--suite", "nonsense"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn verify_det_passes() {
    let o = run(&["verify", "-m", "4", "--suite", "det", "-n", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS det m=4: 100 cases"), "{}", stdout(&o));
}

#[test]
fn verify_trace_reports_count() {
    let o = run(&["verify", "-m", "5", "--suite", "trace", "--max-word-len", "8", "-n", "10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["reports"][0]["metrics"]["elements"].as_u64().unwrap() > 0);
}

#[test]
fn verify_domination_lists_variant() {
    let o = run(&["verify", "-m", "7", "--suite", "domination", "-n", "50", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["reports"][0]["metrics"].get("c3_equals_1_violations").is_some());
}

#[test]
fn verify_failure_exits_1() {
    // The exclusive column split is impossible for odd m.
    let o = run(&["verify", "-m", "5", "--suite", "columns", "-n", "20"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("FAIL columns"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "-m", "6", "--suite", "bounds,growth", "-n", "40", "--seed", "7", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["verify", "-m", "6", "--suite", "bounds,growth", "-n", "40", "--seed", "8", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sturmian_report() {
    let o = run(&["sturmian", "-m", "4", "--rcf", "1,2,3,4,5,6", "--len", "500", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["fires"].is_boolean());
    assert_eq!(v["word"].as_str().unwrap().split(',').count(), 500);
    for row in v["complexity"].as_array().unwrap() {
        assert_eq!(row["count"].as_u64().unwrap(), row["n"].as_u64().unwrap() + 1);
    }
}

#[test]
fn sturmian_golden_complexity() {
    let rcf = vec!["1"; 30].join(",");
    let o = run(&["sturmian", "-m", "5", "--rcf", &rcf, "--len", "300"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("   20  21\n"), "{s}");
    assert!(!s.contains("(!)"));
}

#[test]
fn sturmian_letters_checked() {
    let rcf = vec!["1"; 30].join(",");
    let o = run(&["sturmian", "-m", "4", "--rcf", &rcf, "--len", "100", "--letters", "+1:1,-1:2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("word: +1:1,-1:2"));
    // For m = 3 no (-1,1) letter may follow another in a run; the golden word has such runs.
    let o = run(&["sturmian", "-m", "3", "--rcf", &rcf, "--len", "100", "--letters", "-1:1,+1:3"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["sturmian", "-m", "4", "--rcf", "1,2", "--letters", "+1:1,+1:1"])), 2);
}

#[test]
fn sturmian_needs_enough_quotients() {
    let o = run(&["sturmian", "-m", "4", "--rcf", "1,1,1", "--len", "500"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("quotients"));
}

#[test]
fn criteria_on_periodic_expansion() {
    let o = run(&["expand", "-m", "4", "1/2", "--format", "json"]);
    let p = temp_file("half.json", &stdout(&o));
    let o = run(&["criteria", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["input_status"]["status"], "periodic");
    assert!(v["periodic_note"].is_string());
    // The statistic keeps climbing along the prefixes.
    let trend: Vec<f64> = v["stammer_trend"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let (a, b) = t["statistic"].as_str().unwrap().split_once('/').unwrap_or((t["statistic"].as_str().unwrap(), "1"));
            a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap()
        })
        .collect();
    assert!(trend.windows(2).all(|w| w[1] > w[0]), "{trend:?}");
    assert_eq!(v["growth_criterion"]["fires"], false);
    for key in ["statistic", "threshold", "window", "fires"] {
        assert!(v["growth_criterion"].get(key).is_some(), "{key}");
    }
}

#[test]
fn criteria_on_lambda_powers() {
    let q: Vec<String> = std::iter::once("1".to_string()).chain((1..=60).map(|k| format!("l^{k}"))).collect();
    let p = temp_file("lam.json", &serde_json::json!({"m": 4, "q": q}).to_string());
    let o = run(&["criteria", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["growth_criterion"]["fires"], false);
    assert!(v["stammer_criterion"].is_null());
}

#[test]
fn criteria_on_word_text() {
    let p = temp_file("w.txt", "+1:1,+1:2,+1:1,+1:2,+1:1\n");
    assert_eq!(code(&run(&["criteria", p.to_str().unwrap()])), 2);
    let o = run(&["criteria", "-m", "5", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("5 letters"));
}

#[test]
fn criteria_input_errors() {
    let o = run(&["criteria", "/nonexistent/expansion.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
    let p = temp_file("bad.json", "{\"m\": 4, \"status\": \"sideways\", \"quotients\": \"+1:1\"}");
    assert_eq!(code(&run(&["criteria", p.to_str().unwrap()])), 2);
    let o = run(&["expand", "-m", "4", "1/2", "--format", "json"]);
    let p = temp_file("half5.json", &stdout(&o));
    assert_eq!(code(&run(&["criteria", "-m", "5", p.to_str().unwrap()])), 2);
}

#[test]
fn periodic_status_parses_back() {
    let o = run(&["expand", "-m", "6", "1", "--reduce", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let e: ExpansionJson = serde_json::from_value(v["expansion"].clone()).unwrap();
    let back = ExpansionResult::from_json(&field_new(6).unwrap(), &e).unwrap();
    assert!(matches!(back.status, ExpansionStatus::Periodic { .. } | ExpansionStatus::Finite));
}
