use std::fs;
use std::process::{Command, Output};

fn boolsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boolsd")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn convolving_diracs_adds_locations() {
    let o = boolsd(&["convolve", "--a", "dirac:1", "--b", "dirac:2"]);
    assert!(o.status.success());
    let v = json(&o);
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0]["location"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((atoms[0]["mass"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}

#[test]
fn free_poisson_one_passes() {
    let o = boolsd(&["check-sd", "--dist", "mp", "--lambda", "1"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["verdict"], "pass");
    let o = boolsd(&["check-sd", "--dist", "mp", "--param", "lambda=2"]);
    assert_eq!(json(&o)["verdict"], "fail");
}

#[test]
fn normal_threshold_values() {
    let v = json(&boolsd(&["normal-threshold"]));
    let (a0, m0) = (v["a0"].as_f64().unwrap(), v["M0"].as_f64().unwrap());
    assert!((a0 + 2.03).abs() < 0.05 && (m0 - 3.09).abs() < 0.05, "{a0} {m0}");
}

#[test]
fn every_listed_id_runs_check_sd() {
    let list = stdout(&boolsd(&["list"]));
    let ids: Vec<&str> = list.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert!(ids.len() >= 14);
    for id in ids {
        let o = boolsd(&["check-sd", "--dist", id]);
        assert!(o.status.success(), "{id}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        assert!(["pass", "fail", "inconclusive"].contains(&v["verdict"].as_str().unwrap()), "{id}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        vec!["k-profile", "--dist", "kesten", "--format", "csv"],
        vec!["invert", "--dist", "semicircle", "--format", "json"],
        vec!["check-sd", "--dist", "normal", "--m", "1"],
        vec!["shift-scan", "--grid", "2.9:3.3:5", "--format", "svg"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{i}-{rep}"));
            let mut a = args.clone();
            a.extend(["--out", out.to_str().unwrap()]);
            let o = boolsd(&a);
            assert!(o.status.success(), "{args:?}");
            let path = stdout(&o).trim().to_string();
            texts.push(fs::read(path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(boolsd(&["check-sd", "--dist", "nope"]).status.code(), Some(2));
    assert_eq!(boolsd(&["check-sd", "--dist", "mp", "--lambda", "-1"]).status.code(), Some(2));
    assert_eq!(boolsd(&["check-sd"]).status.code(), Some(2));
    assert_eq!(boolsd(&["invert", "--dist", "mp", "--grid", "1:0:3"]).status.code(), Some(2));
    assert_eq!(boolsd(&["bijection", "--dist", "stable"]).status.code(), Some(2));
    assert_eq!(boolsd(&["frobnicate"]).status.code(), Some(2));
    // the cofactor check fails for MP_2, which is a result, not an error
    let o = boolsd(&["decompose", "--dist", "mp", "--lambda", "2"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["selfdecomposable_at_factor"], false);
}

#[test]
fn json_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.json");
    fs::write(&path, r#"{"atoms":[{"x":-1,"w":0.5},{"x":1,"w":0.5}],"mass":1}"#).unwrap();
    let v = json(&boolsd(&["atoms", "--measure", path.to_str().unwrap()]));
    assert_eq!(v["atoms"].as_array().unwrap().len(), 2);
    let o = boolsd(&["check-sd", "--measure", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["verdict"], "pass");
}

#[test]
fn reproduce_paper_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = boolsd(&["reproduce-paper", "--out", dir.path().to_str().unwrap()]);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion ")).count(), 8, "{text}");
    assert_eq!(o.status.code(), Some(0), "{text}");
    for f in ["summary.csv", "summary.json", "fig1_p_curve.svg", "fig2_k_normal_3.05.svg", "fig3_k_normal_3.2.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
