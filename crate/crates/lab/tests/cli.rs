use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_kg-lab");

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("kg-lab-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run_config(text: &str, dir: &Path, workers: &str) -> std::process::Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, text).unwrap();
    Command::new(BIN)
        .arg("run")
        .arg(&cfg)
        .env("KG_LAB_OUT", dir.join("out"))
        .env("KG_LAB_WORKERS", workers)
        .output()
        .unwrap()
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir.join("out"))
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

const GOOD_UNKNOWN: &str = "schema = 1
experiment = good-unknown-scaling
shape = band-mean
eps = 0.05, 0.025, 0.0125
target = 2
tolerance = 0.1
q_limit = 0.5
";

#[test]
fn same_config_gives_identical_bytes() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    let ra = run_config(GOOD_UNKNOWN, &a, "1");
    let rb = run_config(GOOD_UNKNOWN, &b, "2");
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(rb.status.success());
    let (oa, ob) = (outputs(&a), outputs(&b));
    assert_eq!(oa.len(), 3);
    assert_eq!(oa, ob);
    let csv = String::from_utf8(oa.iter().find(|(n, _)| n.ends_with(".csv")).unwrap().1.clone()).unwrap();
    assert!(csv.starts_with("label,eps,diff_hn,w3inf,hn,ratio,q_sup\n"), "{csv}");
    for d in [a, b] {
        fs::remove_dir_all(d).unwrap();
    }
}

#[test]
fn written_config_reproduces_the_run() {
    let a = scratch("replay");
    assert!(run_config(GOOD_UNKNOWN, &a, "1").status.success());
    let first = outputs(&a);
    let (cfg_name, cfg_text) = first.iter().find(|(n, _)| n.ends_with(".cfg")).unwrap().clone();
    let b = scratch("replay-b");
    assert!(run_config(&String::from_utf8(cfg_text).unwrap(), &b, "1").status.success());
    let second = outputs(&b);
    assert_eq!(first, second, "{cfg_name}");
    for d in [a, b] {
        fs::remove_dir_all(d).unwrap();
    }
}

#[test]
fn malformed_configs_are_rejected() {
    let d = scratch("bad");
    for (text, needle) in [
        ("experiment = phase-scan\nschema = 1\n", "first key"),
        ("schema = 2\nexperiment = phase-scan\n", "schema 2"),
        ("schema = 1\nexperiment = phase-scan\nradius = -1\n", "positive"),
        ("schema = 1\nexperiment = phase-scan\nbogus = 3\n", "unknown key"),
        ("schema = 1\nexperiment = normal-form\ndt = 5\n", "CFL"),
        ("schema = 1\nexperiment = good-unknown-scaling\neps = \n", "eps"),
    ] {
        let out = run_config(text, &d, "1");
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{text}: {err}");
    }
    fs::remove_dir_all(d).unwrap();
}

#[test]
fn bad_worker_count_is_an_error() {
    let d = scratch("workers");
    let out = run_config(GOOD_UNKNOWN, &d, "zero");
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(d).unwrap();
}

#[test]
fn scan_phase_command() {
    let d = scratch("scan");
    let out = Command::new(BIN)
        .args(["scan-phase", "--signs", "+-", "--radius", "4", "--step", "0.5", "--dims", "1,2"])
        .env("KG_LAB_OUT", &d)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("phase-scan") && text.contains("verdict: PASS"), "{text}");
    fs::remove_dir_all(d).unwrap();
}

#[test]
fn acceptance_subset_exit_status() {
    let out = Command::new(BIN).args(["acceptance", "--only", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("criterion 2 operator-identities: PASS"), "{text}");
}
