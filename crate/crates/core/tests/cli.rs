use std::path::Path;
use std::process::{Command, Output};

use idlab::cli::Report;
use idlab::{laws, Verdict};
use serde_json::Value;

fn idlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("IDLAB_TOLERANCE_TABLE")
        .output()
        .unwrap()
}

fn report(out: &Path, verb: &str) -> Value {
    serde_json::from_slice(&std::fs::read(out.join(format!("{verb}-report.json"))).unwrap()).unwrap()
}

#[test]
fn poisson_file_is_id() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("poisson2.json");
    std::fs::write(&file, serde_json::to_string(&laws::poisson(2.0, 64).unwrap()).unwrap()).unwrap();
    let o = idlab(&["idcheck", "--pmf", &format!("@{}", file.display()), "--terms", "64"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "idcheck");
    assert_eq!(r["verdict"], "ID");
    assert!((r["result"]["rate"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(dir.path().join("idcheck-plot.csv").exists());
}

#[test]
fn binomial_file_is_not_id() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("binom2.json");
    std::fs::write(&file, r#"{"p":[0.25,0.5,0.25],"tail_bound":0.0}"#).unwrap();
    let o = idlab(&["idcheck", "--pmf", &format!("@{}", file.display())], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path(), "idcheck");
    assert_eq!(r["verdict"], "NOT_ID");
    assert_eq!(r["result"]["witness_index"], 2);
}

#[test]
fn pgf_table_reports_one_twelfth() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(idlab(&["example2"], dir.path()).status.code(), Some(0));
    let r = report(dir.path(), "example2");
    assert!((r["result"]["deviation_at_zero"].as_f64().unwrap() - 1.0 / 12.0).abs() < 1e-15);
    assert_eq!(r["result"]["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn zero_origin_atom_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(idlab(&["theorem7", "--pmf", "geometric1:p=0.5"], dir.path()).status.code(), Some(2));
    assert_eq!(report(dir.path(), "theorem7")["verdict"], "INCONCLUSIVE");
}

#[test]
fn usage_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = idlab(&["idcheck", "--pmf", "gamma:shape=-1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("shape") && err.contains("> 0"), "{err}");
    assert!(err.contains("family:key=val"), "{err}");
    assert!(!dir.path().join("idcheck-report.json").exists());

    assert_eq!(idlab(&["idcheck", "--pmf", "poisson:rate=1", "--bogus", "1"], dir.path()).status.code(), Some(3));
    assert_eq!(idlab(&["nonsense"], dir.path()).status.code(), Some(3));
    let o = idlab(&["idcheck", "--pmf", "poisson:rate=1,mean=2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mean"));
}

#[test]
fn reports_are_byte_identical_and_round_trip() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["lemma3", "--phi", "exponential:rate=1", "--samples", "20000", "--seed", "7"];
    idlab(&args, a.path());
    idlab(&args, b.path());
    let ra = std::fs::read(a.path().join("lemma3-report.json")).unwrap();
    assert_eq!(ra, std::fs::read(b.path().join("lemma3-report.json")).unwrap());
    assert_eq!(std::fs::read(a.path().join("lemma3-plot.csv")).unwrap(), std::fs::read(b.path().join("lemma3-plot.csv")).unwrap());

    let parsed: Report = serde_json::from_slice(&ra).unwrap();
    assert_eq!(parsed.verb, "lemma3");
    assert_eq!(parsed.config["seed"], 7);
    let mut again = serde_json::to_vec_pretty(&parsed).unwrap();
    again.push(b'\n');
    assert_eq!(again, ra);
    assert!(parsed.provenance.wall_time_s.is_none());
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    idlab(&["example2", "--timing"], dir.path());
    assert!(report(dir.path(), "example2")["provenance"]["wall_time_s"].is_number());
}

#[test]
fn every_verb_dumps_a_schema() {
    let dir = tempfile::tempdir().unwrap();
    let verbs = [
        "idcheck", "decompose", "thin", "sdtest", "stable-check", "pgf-from-lt", "pphi", "lemma3", "transfer-sum", "theorem7",
        "opstable2d", "maxstab", "phi-mid", "simulate", "example2",
    ];
    for verb in verbs {
        let o = idlab(&[verb, "--schema"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{verb}");
        let s: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(s["verb"], verb);
        let help = idlab(&[verb, "--help"], dir.path());
        assert_eq!(help.status.code(), Some(0), "{verb}");
    }
}

#[test]
fn tolerance_table_override() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["maxstab", "--case", "exponential-geo-min", "--p", "0.5", "--samples", "20000"];
    assert_eq!(idlab(&args, dir.path()).status.code(), Some(1));

    let table = dir.path().join("tol.json");
    std::fs::write(&table, r#"{"extreme_ks": 1.0, "extreme_identity": 1.0}"#).unwrap();
    let run = |table: &Path| {
        Command::new(env!("CARGO_BIN_EXE_idlab")).args(args).arg("--out").arg(dir.path()).env("IDLAB_TOLERANCE_TABLE", table).output().unwrap()
    };
    assert_eq!(run(&table).status.code(), Some(0));

    std::fs::write(&table, r#"{"extreme_kss": 1.0}"#).unwrap();
    let o = run(&table);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("extreme_kss"));
}

#[test]
fn off_diagonal_exponent_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = idlab(&["opstable2d", "--phi", "exponential:rate=1", "--alpha1", "0.5", "--alpha2", "0.5", "--exponent", "2,0.1,0,2", "--samples", "100"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verdict_exit_codes() {
    assert_eq!(idlab::cli::exit_code(Verdict::Pass), 0);
    assert_eq!(idlab::cli::exit_code(Verdict::Id), 0);
    assert_eq!(idlab::cli::exit_code(Verdict::Fail), 1);
    assert_eq!(idlab::cli::exit_code(Verdict::NotId), 1);
    assert_eq!(idlab::cli::exit_code(Verdict::Inconclusive), 2);
}

#[test]
fn simulate_dumps_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let o = idlab(&["simulate", "--law", "gamma:shape=2,rate=1", "--samples", "5000"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("simulate-plot.csv")).unwrap();
    assert!(csv.starts_with("# law=gamma"));
    assert_eq!(csv.lines().count(), 5001);
}
