use std::path::PathBuf;
use std::process::{Command, Output};

fn kll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kll")).args(args).env_remove("KLL_BUDGET").output().unwrap()
}

fn corpus(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel).display().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn cheeger_cycle_is_exact() {
    let o = kll(&["cheeger", "--cycle", "6"]);
    assert!(o.status.success());
    assert_eq!(json(&o), serde_json::json!({ "h": "2/3" }));
}

#[test]
fn field_reports_signature() {
    let o = kll(&["field", "--poly", "[1,0,-2,-1,0,1]", "--primes", "11"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["signature"], serde_json::json!([3, 1]));
}

#[test]
fn verify_default_corpus() {
    let o = kll(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["failed"], 0);
}

#[test]
fn verify_failure_exits_one() {
    let dir = std::env::temp_dir().join(format!("kll-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.json");
    std::fs::write(&p, r#"{"version":1,"examples":[{"name":"wrong","check":{"kind":"gs_threshold","d":80}}]}"#).unwrap();
    let o = kll(&["verify", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["examples"][0]["name"], "wrong");
}

#[test]
fn schema_error_exits_two_with_pointer() {
    let dir = std::env::temp_dir().join(format!("kll-cli-schema-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("g.json");
    std::fs::write(&p, r#"{"V":2,"edges":[[0,1],[0,"x"],[1,1]]}"#).unwrap();
    let o = kll(&["graph", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/edges/1/1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kll(&["cheeger", "--cycle", "six"]).status.code(), Some(2));
    assert_eq!(kll(&["field", "--poly", "[2,0,3]"]).status.code(), Some(2));
}

#[test]
fn budget_flag_and_env() {
    assert_eq!(kll(&["count", "--modulus", "5", "--budget", "100"]).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_kll")).args(["count", "--modulus", "5"]).env("KLL_BUDGET", "100").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    // the flag overrides the environment
    let o = Command::new(env!("CARGO_BIN_EXE_kll")).args(["count", "--modulus", "2", "--budget", "1000"]).env("KLL_BUDGET", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_is_thread_independent() {
    let a = kll(&["count", "--modulus", "4", "--threads", "1", "--dump"]);
    let b = kll(&["count", "--modulus", "4", "--threads", "8", "--dump"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn corpus_inputs_run() {
    for (cmd, file) in [("orbifold", "orbifolds/theta_223.json"), ("graph", "graphs/petersen.json"), ("cheeger", "cheeger/petersen.json"), ("quotient", "quotients/hall_5_7.json")] {
        let o = kll(&[cmd, "--input", &corpus(file)]);
        assert!(o.status.success(), "{cmd} {file}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn tower_csv() {
    let o = kll(&["tower", "--n1", "50", "--depth", "5", "--csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("i,n_i,bound_i,quotient_i"));
    assert_eq!(text.lines().count(), 6);
}
