use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entroscale"))
        .args(args)
        .output()
        .expect("spawn entroscale")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn every_shipped_config_round_trips() {
    let mut seen = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let p = path.to_str().unwrap();
        let c = json(&run(&["classify", "--config", p]));
        let density = run(&["density", "--config", p]);
        if c["supported"].as_bool().unwrap() {
            let d = json(&density);
            assert_eq!(d["case"], c["case"], "{p}");
            let s = d["s_infinity"].as_f64().unwrap();
            assert!((0.0..=std::f64::consts::LN_2 + 1e-12).contains(&s), "{p}: {s}");
        } else {
            assert_eq!(code(&density), 3, "{p}");
        }
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn classify_reports_cases() {
    let xy = json(&run(&["classify", "--config", &config("xy_ness.json")]));
    assert_eq!(xy["case"], "Case2");
    assert_eq!(xy["zero_set"].as_array().unwrap().len(), 0);
    let p = &xy["partition"];
    let total = p["length_l"].as_f64().unwrap() + p["length_r"].as_f64().unwrap();
    assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-9);

    let hop = json(&run(&["classify", "--config", &config("hopping_case3.json")]));
    assert_eq!(hop["case"], "Case3");

    let c1 = json(&run(&["classify", "--config", &config("constant_case1.json")]));
    assert_eq!(c1["case"], "Case1");
    assert!(c1["partition"].is_null());
    assert!(c1["notice"].as_str().unwrap().contains("refuse"));
}

#[test]
fn unsupported_case_exits_three() {
    for cmd in ["density", "sweep", "oracle"] {
        let out = run(&[cmd, "--config", &config("constant_case1.json"), "--nu", "2"]);
        assert_eq!(code(&out), 3, "{cmd}");
        assert!(stderr(&out).contains("Case1"));
    }
}

#[test]
fn density_verdicts() {
    let g = json(&run(&["density", "--config", &config("xy_ground.json")]));
    assert_eq!(g["verdict"], "vanishing");
    assert!(g["s_infinity"].as_f64().unwrap() < 1e-9);

    let h = json(&run(&["density", "--config", &config("xy_half.json")]));
    assert!((h["s_infinity"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    assert_eq!(h["verdict"], "non-vanishing");

    let n = json(&run(&["density", "--config", &config("xy_ness.json")]));
    assert!(n["s_infinity"].as_f64().unwrap() > 0.3);
    assert!(!n["sigma"].as_array().unwrap().is_empty());
}

#[test]
fn half_constant_sweep_is_exact() {
    let out = run(&["sweep", "--config", &config("xy_half.json")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nu,S_nu,S_nu_over_nu,s_infinity,gap,S_nu_bits"));
    let mut n = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let nu: f64 = cells[0].parse().unwrap();
        let bits: f64 = cells[5].parse().unwrap();
        let gap: f64 = cells[4].parse().unwrap();
        assert_eq!(bits, nu);
        assert!(gap < 1e-12);
        n += 1;
    }
    assert_eq!(n, 3);
}

#[test]
fn sweep_gap_decreases() {
    let out = run(&["sweep", "--config", &config("xy_ness.json"), "--nu-list", "64,256", "--format", "json"]);
    let rows = json(&out);
    let gaps: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["gap"].as_f64().unwrap()).collect();
    assert_eq!(rows[0]["nu"], 64);
    assert!(gaps[1] < gaps[0], "{gaps:?}");
}

#[test]
fn output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("xy_ness.json");
    let mut files = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let path = dir.path().join(format!("sweep{i}.csv"));
        let out = Command::new(env!("CARGO_BIN_EXE_entroscale"))
            .args(["sweep", "--config", &cfg, "--nu", "16", "48", "32", "--out"])
            .arg(&path)
            .env("ENTROSCALE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        assert!(out.stdout.is_empty());
        files.push(fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    let nus: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(nus, ["16", "48", "32"]);

    let a = run(&["density", "--config", &cfg]);
    let b = run(&["density", "--config", &cfg]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn oracle_reports() {
    let r = json(&run(&["oracle", "--config", &config("xy_ness.json"), "--nu", "3"]));
    assert_eq!(r["verdict"], "PASS");
    let spread = ["entropy_direct", "entropy_product", "entropy_lambda"]
        .map(|k| r[k].as_f64().unwrap());
    assert!((spread[0] - spread[1]).abs() < 1e-8 && (spread[0] - spread[2]).abs() < 1e-8);

    let h = json(&run(&["oracle", "--config", &config("xy_half.json"), "--nu", "2"]));
    assert_eq!(h["verdict"], "PASS");
    assert!(h["identity_deviation"].as_f64().unwrap() < 1e-12);
    assert!(h["checks"].as_array().unwrap().iter().any(|c| c["name"] == "R = 1/2^nu"));

    let too_big = run(&["oracle", "--config", &config("xy_ness.json"), "--nu", "25"]);
    assert_eq!(code(&too_big), 2);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = fs::read_to_string(configs().join("xy_ness.json")).unwrap();
    fs::write(&path, text.replace("\"beta_R\"", "\"beta_Right\"")).unwrap();
    let out = run(&["density", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let msg = stderr(&out);
    assert!(msg.contains("beta_Right") && msg.contains("line"), "{msg}");

    fs::write(&path, text.replace("\"beta_L\": 2.0", "\"beta_L\": 7.0")).unwrap();
    let out = run(&["density", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("beta_L"));

    let out = run(&["sweep", "--config", &config("xy_ness.json"), "--nu", "1"]);
    assert_eq!(code(&out), 2);
    let out = run(&["density", "--config", "/nonexistent/config.json"]);
    assert_eq!(code(&out), 2);
}
