use std::fs;
use std::process::{Command, Output};

use prstrata::{standard_free_chain, FieldCtx};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prstrata")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn census_e1_has_one_row_of_three() {
    let o = run(&["census", "--e", "1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "e,q,lambda,T,m1,count");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].ends_with(",3"), "{}", rows[1]);
}

#[test]
fn census_json_totals() {
    let o = run(&["census", "--e", "3", "--q", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let total: u64 = v["censuses"][0]["counts"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 64);
}

#[test]
fn hasse_suite_reports_the_table_mismatch() {
    let o = run(&["verify", "--suite", "hasse", "--e", "4", "--q", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(2,2){4}"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], Value::Bool(false));
}

#[test]
fn hodge_suite_passes() {
    let o = run(&["verify", "--suite", "hodge", "--e", "3", "--q", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn hodge_raise_rejects_a_free_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("free.json");
    let c = standard_free_chain(&FieldCtx::prime(2).unwrap(), 4);
    fs::write(&path, c.to_json().to_string()).unwrap();
    let o = run(&["deform", "--chain", path.to_str().unwrap(), "--recipe", "hodge-raise"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).to_lowercase().contains("deformable"), "{}", stderr(&o));
}

#[test]
fn invert_m1_on_the_fixed_point_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = run(&["witness", "--m", "3", "--q", "2", "--fixed-point", "--out", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let ws = w.to_str().unwrap();
    let o = run(&["deform", "--chain", ws, "--model", ws, "--recipe", "invert-m1", "--target", "lambda=(2,2);T={2,3,4};m1=1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["generic"]["label"]["m1"], "1");
}

#[test]
fn literal_witness_fails_its_claimed_line() {
    let o = run(&["witness", "--m", "2", "--c", "1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAIL image line"));
}

#[test]
fn invalid_inputs_exit_2() {
    assert_eq!(run(&["census", "--e", "2", "--q", "6"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--e", "0"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["deform", "--chain", "/nonexistent.json", "--recipe", "search"]).status.code(), Some(2));
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "e = 2\nnot_a_flag = 1\n").unwrap();
    let o = run(&["census", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not_a_flag"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "# census settings\ne = 3\nq = 3\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_config = stdout(&run(&["census", "--config", c]));
    assert!(from_config.lines().nth(1).unwrap().starts_with("3,3,"));
    let overridden = stdout(&run(&["census", "--config", c, "--e", "2"]));
    assert!(overridden.lines().nth(1).unwrap().starts_with("2,3,"));
    assert_eq!(overridden, stdout(&run(&["census", "--e", "2", "--q", "3"])));
}

#[test]
fn outputs_are_deterministic_across_runs_and_jobs() {
    for args in [
        vec!["census", "--e", "4", "--q", "2,3"],
        vec!["poset", "--e", "4", "--q", "2", "--layer", "refined", "--format", "json"],
        vec!["fibers", "--e", "4", "--q", "2,3"],
        vec!["orbits", "--e", "2", "--q", "3"],
    ] {
        let base = stdout(&run(&args));
        assert!(!base.is_empty());
        for jobs in ["1", "4"] {
            let mut a = args.clone();
            a.extend(["--jobs", jobs]);
            assert_eq!(stdout(&run(&a)), base, "{args:?} --jobs {jobs}");
        }
    }
}

#[test]
fn out_writes_a_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census.csv");
    let o = run(&["census", "--e", "2", "--q", "2", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(fs::read_to_string(&out).unwrap().starts_with("e,q,lambda"));
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("census.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["exit_code"], 0);
}

#[test]
fn help_is_available_for_every_subcommand() {
    for sub in ["census", "verify", "poset", "deform", "fibers", "orbits", "witness"] {
        let o = run(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
}
