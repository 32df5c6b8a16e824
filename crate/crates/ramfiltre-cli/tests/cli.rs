//! End-to-end runs of the `ramfiltre` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramfiltre")).args(args).env_remove("RAMFILTRE_GRID").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn compute_json(args: &[&str]) -> Value {
    let mut full = vec!["compute"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn strings(v: &Value, field: &str) -> Vec<String> {
    v["levels"].as_array().unwrap().iter().map(|l| l[field].as_str().unwrap().to_string()).collect()
}

#[test]
fn compute_small_divisible() {
    let doc = compute_json(&["--p", "3", "--r", "2", "--s", "1", "--vclass", "div"]);
    assert_eq!(strings(&doc, "jump"), ["0", "1", "4"]);
    assert_eq!(strings(&doc, "order"), ["18", "9", "3"]);
    assert_eq!(doc["D"], "1");
}

#[test]
fn compute_nondivisible_example_labels() {
    let doc = compute_json(&["--p", "3", "--r", "4", "--s", "1,2,3", "--vclass", "nondiv"]);
    let fixed = strings(&doc, "fixed_field");
    assert_eq!(
        fixed[1..],
        ["L_{1,0,0,0}", "L_{1,1,1,0}", "L_{2,1,1,0}", "L_{2,1,2,1}", "L_{3,1,2,1}", "L_{3,1,2,2}", "L_{4,1,2,2}"]
    );
    assert_eq!(strings(&doc, "jump").iter().filter(|j| *j != "0").count(), 7);
}

#[test]
fn compute_tame_scaling() {
    let doc = compute_json(&["--p", "3", "--r", "2", "--s", "1", "--vclass", "div", "--tame", "5:1"]);
    assert_eq!(strings(&doc, "jump")[1..], ["5", "20"]);
    assert_eq!(doc["D"], "5");
    assert_eq!(doc["spec"]["tame"], "5:1");
}

#[test]
fn compute_json_is_canonical() {
    let o = run(&["compute", "--p", "5", "--r", "3", "--s", "1,2", "--vclass", "nondiv", "--tame", "2:1,7:1"]);
    let text = stdout(&o);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(format!("{}\n", serde_json::to_string_pretty(&v).unwrap()), text);
    fn no_numbers(v: &Value) -> bool {
        match v {
            Value::Number(_) => false,
            Value::Array(a) => a.iter().all(no_numbers),
            Value::Object(m) => m.values().all(no_numbers),
            _ => true,
        }
    }
    assert!(no_numbers(&v));
}

#[test]
fn compute_csv_encodes_the_json_leaves() {
    let args = ["--p", "3", "--r", "3", "--s", "2,1", "--vclass", "nondiv", "--tame", "5:1"];
    let doc = compute_json(&args);
    let mut full = vec!["compute"];
    full.extend_from_slice(&args);
    full.extend_from_slice(&["--format", "csv"]);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut rebuilt = 0;
    for rec in rd.records() {
        let rec = rec.unwrap();
        let mut node = &doc;
        for part in rec[0].split('.') {
            node = match part.parse::<usize>() {
                Ok(i) if node.is_array() => &node[i],
                _ => &node[part],
            };
        }
        let leaf = match node {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        assert_eq!(leaf, &rec[1], "key {}", &rec[0]);
        rebuilt += 1;
    }
    assert!(rebuilt > 20);
}

#[test]
fn compute_text_lists_levels() {
    let o = run(&["compute", "--p", "3", "--r", "2", "--s", "1", "--vclass", "div", "--format", "text"]);
    let text = stdout(&o);
    assert!(text.contains("L_{2,1} p=3 vclass=div D=1"));
    assert!(text.lines().any(|l| l.split_whitespace().take(3).eq(["2", "4", "i"])));
}

#[test]
fn compute_rejects_invalid_specs() {
    for args in [
        ["compute", "--p", "4", "--r", "2", "--s", "1", "--vclass", "div"],
        ["compute", "--p", "3", "--r", "1", "--s", "2", "--vclass", "div"],
        ["compute", "--p", "2", "--r", "2", "--s", "1", "--vclass", "div"],
        ["compute", "--p", "3", "--r", "2", "--s", "2,1", "--vclass", "div"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("DomainError"));
    }
    let o = run(&["compute", "--p", "5", "--r", "2", "--s", "1", "--vclass", "div", "--tame", "5:1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jump_examples() {
    for (args, want) in [
        (["--r", "2", "--s", "1", "--k", "1", "--vclass", "div"], "4"),
        (["--r", "2", "--s", "1,1", "--k", "3", "--vclass", "nondiv"], "13"),
        (["--r", "1", "--s", "1", "--k", "2", "--vclass", "nondiv"], "3"),
    ] {
        for path in ["rec", "closed", "both"] {
            let mut full = vec!["jump", "--p", "3", "--path", path];
            full.extend_from_slice(&args);
            let o = run(&full);
            assert_eq!(o.status.code(), Some(0), "{full:?}");
            assert_eq!(stdout(&o).trim(), want, "{full:?}");
        }
    }
}

#[test]
fn jump_domain_errors() {
    let o = run(&["jump", "--p", "3", "--r", "2", "--s", "1", "--k", "3", "--vclass", "div"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["jump", "--p", "3", "--r", "1", "--s", "1", "--k", "1", "--vclass", "div"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn jump_both_outside_closed_window_uses_rec() {
    let o = run(&["jump", "--p", "3", "--r", "2", "--s", "1,2", "--k", "1", "--vclass", "div", "--path", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed forms do not apply"));
}

#[test]
fn table_row_contains_known_values() {
    let o = run(&["table", "--p", "3", "--n", "1", "--rmax", "4", "--vclass", "div"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<Vec<String>> = rd.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.contains(&vec!["4".into(), "2".into(), "202".into(), "13".into()]));
    assert!(rows.contains(&vec!["1".into(), "1".into(), "".into(), "1".into()]));
}

#[test]
fn table_nondivisible_single_k() {
    let o = run(&["table", "--p", "3", "--n", "1", "--rmax", "3", "--vclass", "nondiv", "--k", "2", "--path", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,s_1,\"t_{1,2}\"");
    assert!(lines.contains(&"1,1,3"));
    assert!(lines.contains(&"2,1,5"));
}

#[test]
fn table_minimal() {
    let o = run(&["table", "--p", "5", "--n", "1", "--rmax", "1", "--vclass", "div"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn verify_quick_and_empty_pass() {
    let o = run(&["verify", "--grid", "quick"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("queries 186\n"));
    assert!(text.contains("status PASS"));

    let o = run(&["verify", "--grid", "empty"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("checks_run 0"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty grid"));
}

#[test]
fn verify_default_grid_passes() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("queries 4174\n"));
}

#[test]
fn verify_grid_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_ramfiltre"))
        .args(["verify", "--jobs", "1"])
        .env("RAMFILTRE_GRID", "empty")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("queries 0\n"));
}

#[test]
fn verify_mutation_fails_with_bounded_listing() {
    let o = run(&["verify", "--grid", "quick", "--mutate", "t12_const"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("status FAIL"));
    let listed = text.lines().filter(|l| l.starts_with("fail ")).count();
    assert!((1..=20).contains(&listed));
}

#[test]
fn verify_json_report() {
    let o = run(&["verify", "--grid", "quick", "--variant", "typeset", "--format", "json", "--max-failures", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "FAIL");
    assert_eq!(v["queries"], "186");
    assert_eq!(v["failures"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_unknown_mutation_is_a_domain_error() {
    let o = run(&["verify", "--grid", "empty", "--mutate", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}
