//! End-to-end behaviour of the `cayley` binary.

use std::process::{Command, Output};

use cayley_cli::{Report, SCHEMA};

fn cayley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley")).args(args).env_remove("CAYLEY_SEED").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn report(o: &Output) -> Report {
    serde_json::from_slice(&o.stdout).expect("JSON report on stdout")
}

#[test]
fn passing_run_exits_zero_with_schema_fields() {
    let o = cayley(&["verify", "--only", "picard.form,appendix.conic", "--trials", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r.schema, SCHEMA);
    assert!(r.pass);
    assert_eq!(r.config.seed, 42);
    assert_eq!(r.config.trials, 5);
    let ids: Vec<&str> = r.certificates.iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids, ["appendix.conic", "picard.form"]);
    assert!(r.certificates.iter().all(|c| c.status == "pass" && !c.verdicts.is_empty() && !c.anchors.is_empty()));
}

#[test]
fn mutant_exits_one_and_names_the_failing_check() {
    let o = cayley(&["verify", "--only", "mutant.lattice-off-by-one"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAIL mutant.lattice-off-by-one: form preserved[gamma]"), "{}", stderr(&o));
    assert!(!report(&o).pass);
}

#[test]
fn unknown_id_exits_two() {
    let o = cayley(&["verify", "--only", "no.such.thing"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no.such.thing"));
}

#[test]
fn missing_report_file_exits_two() {
    let o = cayley(&["report", "/nonexistent/report.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn exhausted_term_budget_exits_three() {
    let o = cayley(&["verify", "--only", "su3.phi", "--term-budget", "10", "--trials", "2"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
}

#[test]
fn skipped_slot_does_not_fail_the_run() {
    let o = cayley(&["verify", "--only", "rank2.g2"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r.certificates[0].status, "skipped");
    assert!(r.certificates[0].skipped.as_deref().unwrap_or("").starts_with("external input missing"));
}

#[test]
fn seed_precedence_flag_then_config_then_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# test config\nseed = 7\ntrials = 3\nonly = picard.lines\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = report(&cayley(&["verify", "--config", cfg]));
    assert_eq!((from_file.config.seed, from_file.config.trials), (7, 3));
    assert_eq!(from_file.certificates.len(), 1);

    let flag = report(&cayley(&["verify", "--config", cfg, "--seed", "9"]));
    assert_eq!(flag.config.seed, 9);

    let env =
        Command::new(env!("CARGO_BIN_EXE_cayley")).args(["verify", "--only", "picard.lines"]).env("CAYLEY_SEED", "11").output().unwrap();
    assert_eq!(report(&env).config.seed, 11);
}

#[test]
fn report_rerenders_saved_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let o = cayley(&["verify", "--only", "picard.ledger", "--out", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let md = cayley(&["report", json.to_str().unwrap()]);
    assert_eq!(code(&md), 0);
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.contains("| picard.ledger | pass |"), "{text}");
}

#[test]
fn identical_seeds_give_identical_reports() {
    let args = ["verify", "--only", "su3.segre,mutant.wrong-cocycle", "--trials", "20", "--seed", "5"];
    let (a, b) = (report(&cayley(&args)), report(&cayley(&args)));
    assert_eq!(a.without_timings(), b.without_timings());
}

#[test]
fn list_shows_every_construction() {
    let o = cayley(&["list"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for id in ["su3.chain", "classical.unitary", "picard.ledger", "rank2.g2", "mutant.twist-sign"] {
        assert!(text.contains(id), "{id} missing");
    }
}
