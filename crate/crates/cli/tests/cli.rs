use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_capclass"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn template_file(dir: &Path, label: &str) -> PathBuf {
    let o = run(&["template", label]);
    assert!(o.status.success());
    write(dir, &format!("{label}.cap"), &stdout(&o))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn template_output() {
    let o = run(&["template", "T10_55_2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "capfile v1 n=7");
    assert_eq!(lines.len(), 11);
    assert!(lines.contains(&"1111000") && lines.contains(&"0011111"));
    assert_eq!(stdout(&run(&["template", "INDEPENDENT8"])).lines().count(), 9);
    assert_eq!(run(&["template", "BOGUS"]).status.code(), Some(2));
}

#[test]
fn check_reports() {
    let dir = tempfile::tempdir().unwrap();
    let t12 = json(&run(&["check", s(&template_file(dir.path(), "T12_7555"))]));
    assert_eq!(t12["is_cap"], true);
    assert_eq!(t12["size"], 12);
    assert_eq!(t12["dim"], 7);
    assert_eq!(t12["complete"], true);
    let t10 = json(&run(&["check", s(&template_file(dir.path(), "T10_55_2"))]));
    assert_eq!(t10["complete"], false);
    assert_eq!(t10["census"], serde_json::json!(["5-5-(2)", "7-5-(4)"]));

    let quad = write(dir.path(), "quad.cap", "capfile v1 n=3\n000\n100\n010\n110\n001\n");
    let q = json(&run(&["check", s(&quad)]));
    assert_eq!(q["is_cap"], false);
    let pts: Vec<u32> = q["quad"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| capclass::gf2::parse_bit_string(v.as_str().unwrap()).unwrap().0)
        .collect();
    assert_eq!(pts.len(), 4);
    assert_eq!(pts.iter().fold(0, |a, b| a ^ b), 0);
}

#[test]
fn parse_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cap", "capfile v1 n=3\n10\n");
    assert_eq!(run(&["check", s(&bad)]).status.code(), Some(3));
    let dup = write(dir.path(), "dup.cap", "capfile v1 n=3\n101\n101\n");
    assert_eq!(run(&["check", s(&dup)]).status.code(), Some(3));
    assert_eq!(run(&["check", "/nonexistent/file.cap"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let a = template_file(dir.path(), "T11_555_333");
    let b = template_file(dir.path(), "T11_755_443");
    let v = json(&run(&["equiv", s(&a), s(&b)]));
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["map"]["rows"].as_array().unwrap().len(), 7);

    let same = json(&run(&["equiv", s(&a), s(&a)]));
    assert_eq!(same["equivalent"], true);
    let rows: Vec<&str> = same["map"]["rows"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
    assert_eq!(rows, ["1000000", "0100000", "0010000", "0001000", "0000100", "0000010", "0000001"]);
    assert_eq!(same["map"]["translation"], "0000000");

    let (c, c2) = capclass::higherdim_pair();
    let c = write(dir.path(), "c.cap", &capclass_cli::capfile::render(&c));
    let c2 = write(dir.path(), "c2.cap", &capclass_cli::capfile::render(&c2));
    let v = json(&run(&["equiv", s(&c), s(&c2)]));
    assert_eq!(v["equivalent"], false);
    assert!(v.get("map").is_none());
}

#[test]
fn classify_with_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reps");
    let v = json(&run(&["classify", "3", "6", "--out", s(&out)]));
    assert_eq!(v["max_size"], 4);
    assert_eq!(v["counts"], serde_json::json!({"4": 1, "5": 0}));
    let file = out.join(v["rows"]["4"][0]["file"].as_str().unwrap());
    let text = std::fs::read_to_string(file).unwrap();
    assert_eq!(text, "capfile v1 n=3\n000\n100\n010\n001\n");

    let v = json(&run(&["classify", "6", "10"]));
    assert_eq!(v["counts"], serde_json::json!({"7": 1, "8": 2, "9": 1, "10": 0}));
    let v = json(&run(&["classify", "7", "13"]));
    assert_eq!(v["counts"], serde_json::json!({"8": 1, "9": 2, "10": 2, "11": 1, "12": 1, "13": 0}));
    assert_eq!(run(&["classify", "9", "10"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let a = bin().args(["classify", "7", "13"]).env("CAPCLASS_THREADS", "1").output().unwrap();
    let b = bin().args(["classify", "7", "13"]).env("CAPCLASS_THREADS", "3").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bad = bin().args(["classify", "3", "5"]).env("CAPCLASS_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn closure_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.cap", "capfile v1 n=2\n00\n10\n01\n");
    let o = run(&["closure", s(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "capfile v1 n=2\n00\n10\n01\n11\n");

    for label in ["T12_5555_233332", "R7"] {
        let p = template_file(dir.path(), label);
        let text = std::fs::read_to_string(&p).unwrap();
        let parsed = capclass_cli::capfile::parse(&text).unwrap();
        assert_eq!(capclass_cli::capfile::render(&parsed), text);
    }
}

#[test]
fn verify_paper_passes() {
    let o = run(&["verify-paper", "--json", "--exchange-trials", "500", "--invariance-maps", "20"]);
    let v = json(&o);
    assert_eq!(v["schema"], "report v1");
    let claims = v["claims"].as_array().unwrap();
    for c in claims {
        assert_eq!(c["status"], "pass", "{c}");
        assert!(c["id"].is_string() && (c["witness"].is_object() || c["witness"].is_array()));
    }
    let criteria: std::collections::BTreeSet<u64> = claims.iter().map(|c| c["criterion"].as_u64().unwrap()).collect();
    assert_eq!(criteria, (1..=12).collect());
    let no13 = claims.iter().find(|c| c["id"] == "no-13-cap").unwrap();
    assert_eq!(no13["witness"]["candidates_of_12_caps"], serde_json::json!([[]]));

    let text = run(&["verify-paper", "--exchange-trials", "50", "--invariance-maps", "2"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn corrupted_templates_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = capclass::TemplateTable::standard();
    // Swap a generator so the 11-cap gains a quad.
    table.templates[8].dependents[2] = vec![1, 2, 3, 4, 6];
    let path = write(dir.path(), "templates.json", &serde_json::to_string(&table).unwrap());
    let o = run(&["verify-paper", "--templates", s(&path), "--exchange-trials", "50", "--invariance-maps", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [ 1] templates"));

    let junk = write(dir.path(), "junk.json", "{not json");
    assert_eq!(run(&["verify-paper", "--templates", s(&junk)]).status.code(), Some(3));
}
