mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{assert_schema, data, read_json};
use serde_json::Value;
use tempfile::TempDir;

fn chords(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chords"))
        .current_dir(dir)
        .env_remove("CHORD_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn measure(name: &str) -> String {
    data(&format!("{name}.json")).display().to_string()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn keys_sorted(v: &Value) -> bool {
    match v {
        Value::Object(map) => {
            let keys: Vec<&String> = map.keys().collect();
            keys.windows(2).all(|w| w[0] < w[1]) && map.values().all(keys_sorted)
        }
        Value::Array(items) => items.iter().all(keys_sorted),
        _ => true,
    }
}

#[test]
fn eval_examples() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&chords(dir.path(), &["eval", &measure("antipodal"), "--r", "1"]));
    assert_eq!(v["value"], 0.25);
    assert_eq!(v["method"], "closed_form");
    assert_schema("eval_report", &v);

    let v = stdout_json(&chords(dir.path(), &["eval", &measure("square"), "--r", "1"]));
    assert_eq!(v["value"], 0.125);
    let v = stdout_json(&chords(
        dir.path(),
        &["eval", &measure("square"), "--r", "1", "--method", "enumerate"],
    ));
    assert_eq!(v["value"], 0.125);

    let v = stdout_json(&chords(
        dir.path(),
        &["eval", &measure("triangle"), "--r", "0.55", "--non-strict"],
    ));
    assert_schema("eval_report", &v);

    let manifest = read_json(&dir.path().join("eval.manifest.json"));
    assert_schema("run_manifest", &manifest);
    assert!(keys_sorted(&manifest));
    assert_eq!(manifest["command"], "eval");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = chords(dir.path(), &["eval", &measure("bad_mass"), "--r", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unit total mass"));

    let cont = chords(dir.path(), &["eval", &measure("uniform"), "--r", "1"]);
    assert_eq!(cont.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&cont.stderr).contains("purely discrete measure"));

    let budget = chords(
        dir.path(),
        &["eval", &measure("square"), "--r", "0.5", "--budget", "2"],
    );
    assert_eq!(budget.status.code(), Some(3));

    let zero = chords(
        dir.path(),
        &["sample", &measure("uniform"), "--r", "0.5", "--trials", "0"],
    );
    assert_eq!(zero.status.code(), Some(2));

    assert_eq!(
        chords(dir.path(), &["eval", &measure("square"), "--r", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(chords(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        chords(dir.path(), &["eval", "missing.json", "--r", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(chords(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn sampling_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = [
        "sample",
        &measure("mixed"),
        "--r",
        "0.7",
        "--trials",
        "200000",
        "--seed",
        "11",
    ];
    let a = chords(dir.path(), &args);
    let b = chords(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 11"));
    let v = stdout_json(&a);
    assert_schema("mc_estimate", &v);

    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    assert_eq!(chords(dir.path(), &one).stdout, a.stdout);

    // the seed falls back to the environment
    let env = Command::new(env!("CARGO_BIN_EXE_chords"))
        .current_dir(dir.path())
        .env("CHORD_SEED", "11")
        .args(&args[..6])
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    let manifest = read_json(&dir.path().join("sample.manifest.json"));
    assert_eq!(manifest["seed"], 11);
}

#[test]
fn karamata_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k.csv");
    let o = chords(
        dir.path(),
        &[
            "karamata",
            "--n",
            "4,12",
            "--r-grid",
            "0.5,1",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,r,inside,total,ratio,law,abs_err");
    assert_eq!(lines.len(), 5);
    // r = 1 counts every crossing
    let full: Vec<&&str> = lines
        .iter()
        .filter(|l| l.split(',').nth(1) == Some("1.0000000000000000e0"))
        .collect();
    assert_eq!(full.len(), 2);
    for l in full {
        assert_eq!(l.split(',').nth(4), Some("1.0000000000000000e0"), "{l}");
    }
    let manifest = read_json(&dir.path().join("k.csv.manifest.json"));
    assert_schema("run_manifest", &manifest);
    assert_eq!(manifest["outputs"][0], out.display().to_string());
}

#[test]
fn optimize_examples() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("opt.json");
    let o = chords(
        dir.path(),
        &[
            "optimize",
            "--objective",
            "one-chord",
            "--r",
            "0.6",
            "--atoms",
            "6",
            "--restarts",
            "4",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = read_json(&out);
    assert_schema("optimum_report", &v);
    assert!((v["best_value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-6);
    assert!(keys_sorted(&v));
    assert_schema(
        "run_manifest",
        &read_json(&dir.path().join("opt.json.manifest.json")),
    );
}

#[test]
fn energy_examples() {
    let dir = TempDir::new().unwrap();
    let v = stdout_json(&chords(dir.path(), &["energy", &measure("uniform")]));
    assert_eq!(v["value"], std::f64::consts::FRAC_2_PI);
    assert_schema("energy_report", &v);
    let v = stdout_json(&chords(
        dir.path(),
        &["energy", &measure("delta"), "--kernel", "minus"],
    ));
    assert!(v["value"].as_f64().unwrap().abs() <= v["tail_bound"].as_f64().unwrap());
    let v = stdout_json(&chords(dir.path(), &["energy", &measure("antipodal")]));
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() <= v["tail_bound"].as_f64().unwrap());
}

#[test]
fn verify_detects_a_broken_closed_form() {
    let dir = TempDir::new().unwrap();
    let summary = dir.path().join("v.json");
    let ok = chords(
        dir.path(),
        &["verify", "--suite", "lemma1", "--out", summary.to_str().unwrap()],
    );
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS"));
    assert_schema("verify_summary", &read_json(&summary));
    let manifest = read_json(&dir.path().join("v.json.manifest.json"));
    assert_eq!(manifest["outputs"][0], summary.display().to_string());

    let bad = chords(
        dir.path(),
        &["verify", "--suite", "lemma1", "--perturb-closed-form", "1e-9"],
    );
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

#[test]
fn verify_fast_suites_pass() {
    let dir = TempDir::new().unwrap();
    for suite in ["w-bound", "el", "energy"] {
        let o = chords(dir.path(), &["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }
}
