use std::path::PathBuf;
use std::process::{Command, Output};

use uclass_cli::json::ClassifyReport;

fn uclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uclass")).args(args).output().unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn roots_prints_the_enumeration() {
    let out = uclass(&["roots", "C", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("roots_C3.txt"));
    let b2 = stdout(&uclass(&["roots", "B", "2"]));
    assert_eq!(b2, "Enumeration of positive roots for B2\n 1 | 1 0\n 2 | 0 1\n 3 | 1 1\n 4 | 1 2\n");
}

#[test]
fn classify_text_is_stable() {
    let out = uclass(&["classify", "B", "2", "2", "--analyze"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("classify_B2_2.txt"));
}

#[test]
fn classify_json_reports_the_class_count() {
    let dir = std::env::temp_dir().join(format!("uclass-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c3.json");
    let out = uclass(&["classify", "C", "3", "2", "--analyze", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["k_poly"], serde_json::json!([1, 9, 25, 19, 2]));
    assert_eq!(value["k_poly_text"], "2v^4+19v^3+25v^2+9v+1");
    let family = value["families"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["c"] == serde_json::json!([2, 3]) && f["d"] == serde_json::json!([7]))
        .unwrap();
    assert_eq!(family["representative"], "x_2(1) x_3(1) x_7(b_7)");
    assert_eq!(family["count_poly"], serde_json::json!([0, 0, 2]));
    for key in ["normalized", "residuals", "centralizer_params", "branches", "centralizer"] {
        assert!(family.get(key).is_some(), "missing {key}");
    }
    let report: ClassifyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn classify_json_without_analysis_omits_counts() {
    let out = uclass(&["classify", "G", "2", "3", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(value.get("k_poly").is_none());
    assert!(value["families"][0].get("branches").is_none());
}

#[test]
fn bruteforce_prints_the_histogram() {
    let out = uclass(&["bruteforce", "G", "2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("bruteforce_G2_2.txt"));
    let profiled = stdout(&uclass(&["bruteforce", "B", "2", "4", "--profile"]));
    assert!(profiled.starts_with("B2 q=4: 58 classes\n"));
    assert!(profiled.contains("elements: 256\n"));
}

#[test]
fn verify_succeeds_on_matching_data() {
    let out = uclass(&["verify", "B", "2", "2", "--q", "2,4,8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("q=8: 274 classes, polynomial gives 274"));
    assert!(!text.contains("MISMATCH"));
}

#[test]
fn tables_match_golden_output() {
    let out = uclass(&["tables"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, golden("tables.txt"));
    for row in [
        "1,2 | =2 | x_1(a_1)x_2(a_2)x_4(c_4) | 2v^2 | 2q^2",
        "5 | − | x_5(a_5) | v | q^5",
        "9 | − | x_9(b_9) | v+1 | q^9",
    ] {
        assert!(text.lines().any(|l| l == row), "missing {row}");
    }
    let b2 = stdout(&uclass(&["tables", "--type", "B2"]));
    assert!(text.starts_with(&b2));
    assert_eq!(stdout(&uclass(&["tables"])), text);
}

#[test]
fn usage_errors_print_the_grammar() {
    for args in [
        &["frobnicate"][..],
        &["roots", "B"],
        &["roots", "F", "4"],
        &["classify", "B", "2", "4"],
        &["verify", "B", "2", "2", "--q", "3"],
        &["verify", "B", "2", "2"],
        &["tables", "--type", "X9"],
    ] {
        let out = uclass(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains("uclass classify <T> <r> <p> [--analyze] [--json PATH]"), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_exits_cleanly() {
    let out = uclass(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("bruteforce"));
}
