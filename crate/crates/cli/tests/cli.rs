//! End-to-end runs of the `stratiflow` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use stratiflow::ratpoly::{parse_poly, poly_from_json, BiPoly, VarPair};
use tempfile::TempDir;

fn stratiflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stratiflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("the binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = stratiflow(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn xs(s: &str) -> BiPoly {
    parse_poly(s, VarPair::XiSigma).unwrap()
}

#[test]
fn generated_family_matches_the_listed_densities() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["--out", "o", "conserved", "gen", "--family", "poly", "--n", "6", "--vars", "xs"]);
    let doc = json(&dir.path().join("o/conserved_poly_xs.json"));
    let densities = doc["densities"].as_array().unwrap();
    assert_eq!(densities.len(), 6);
    let listed = [
        "xi*sigma/2",
        "(1-xi^2)*(1-sigma^2)/2",
        "xi*sigma*(1-xi^2)*(1-sigma^2)",
        "(1-xi^2)*(1-sigma^2)*(5*xi^2*sigma^2 - sigma^2 - xi^2 + 1)/2",
        "xi*sigma*(1-xi^2)*(1-sigma^2)*(7*xi^2*sigma^2 - 3*sigma^2 - 3*xi^2 + 3)",
    ];
    for (d, expected) in densities.iter().zip(listed) {
        assert_eq!(poly_from_json(&d["density"]["polynomial"]).unwrap(), xs(expected));
    }
}

#[test]
fn deformation_of_the_fifth_density_matches_its_listing() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["--out", "o", "deform", "--index", "5"]);
    let doc = json(&dir.path().join("o/deform.json"));
    let entry = &doc["densities"][0];
    assert_eq!(entry["index"], 5);
    assert_eq!(entry["passed"], true);
    let expected = xs(
        "sigma*(56*sigma^4*xi^6 - 110*sigma^4*xi^4 - 45*sigma^2*xi^6 + 60*sigma^4*xi^2 + 139*sigma^2*xi^4 \
         + 5*xi^6 - 6*sigma^4 - 111*xi^2*sigma^2 - 41*xi^4 + 17*sigma^2 + 51*xi^2)/2",
    );
    assert_eq!(poly_from_json(&entry["f1"]).unwrap(), expected);
}

#[test]
fn undeformed_hyperbolic_area_is_four() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["--out", "o", "hyper", "--r", "0"]);
    let area = json(&dir.path().join("o/hyper.json"))["area"].as_f64().unwrap();
    assert!((area - 4.0).abs() < 1e-9, "area {area}");
    let boundary = fs::read_to_string(dir.path().join("o/hyper_boundary.csv")).unwrap();
    assert!(boundary.starts_with("xi,sigma_b\n"));
    assert_eq!(boundary.lines().count(), 202);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for out in ["a", "b"] {
        ok(dir.path(), &["--out", out, "hodograph", "run", "--t", "0:1:0.5", "--x", "-0.5:-0.2:9"]);
        ok(
            dir.path(),
            &["--out", out, "--seed", "7", "sim", "run", "--ic", "random:modes=2,amp=0.1", "--nx", "32", "--T", "0.1"],
        );
    }
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        let a = fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs");
    }
}

#[test]
fn config_file_is_equivalent_to_flags() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "out = \"cfg\"\nformat = \"json\"\ncommand = [\"hyper\"]\n\n[args]\nr = 0.1\norder = \"o1\"\nsamples = 21\n",
    )
    .unwrap();
    ok(dir.path(), &["--config", "run.toml"]);
    ok(dir.path(), &["--out", "flags", "--format", "json", "hyper", "--r", "0.1", "--order", "o1", "--samples", "21"]);
    let a = fs::read(dir.path().join("cfg/hyper.json")).unwrap();
    let b = fs::read(dir.path().join("flags/hyper.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn flags_take_precedence_over_the_config_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.json"), r#"{"out": "cfg", "command": ["hyper"], "args": {"r": 0.1}}"#).unwrap();
    ok(dir.path(), &["--config", "run.json", "--out", "mine"]);
    assert!(dir.path().join("mine/hyper.json").exists());
    assert!(!dir.path().join("cfg").exists());
}

#[test]
fn invalid_parameters_exit_with_status_two_and_a_json_report() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["hyper", "--r", "1.5"][..],
        &["sim", "run", "--cfl", "0.9"][..],
        &["conserved", "gen", "--family", "nope"][..],
    ] {
        let out = stratiflow(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let report: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(report["error"]["message"].is_string());
    }
}

#[test]
fn hodograph_initial_data_run_reports_drift() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "--out", "o", "sim", "run", "--ic", "hodograph:index=3,a=-0.5,b=-0.2", "--r", "0.02", "--model", "o1",
            "--nx", "21", "--T", "0.2", "--monitor-max", "2",
        ],
    );
    let drift = json(&dir.path().join("o/sim_drift.json"));
    let labels: Vec<&str> = drift["report"]["labels"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(labels, ["int xi", "int sigma", "F0_1", "F_1", "F0_2", "F_2"]);
    assert!(dir.path().join("o/sim_t0.2000.csv").exists());
}

#[test]
fn file_initial_data_round_trips_through_a_snapshot() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["--out", "first", "sim", "run", "--nx", "16", "--T", "0.05"]);
    ok(
        dir.path(),
        &["--out", "second", "sim", "run", "--ic", "first/sim_t0.0000.csv", "--T", "0.05"],
    );
    let a = fs::read(dir.path().join("first/sim_t0.0500.csv")).unwrap();
    let b = fs::read(dir.path().join("second/sim_t0.0500.csv")).unwrap();
    assert_eq!(a, b);
}
