use std::path::Path;
use std::process::{Command, Output};

fn ligi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ligi")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn one_step_gives_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let out = ligi(&["integrate", "--problem", "frb_s2", "--steps", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = read(&path);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "t,x,y,z,norm,energy");
    // 17 significant digits per field
    let first = lines[1].split(',').nth(1).unwrap();
    assert_eq!(first.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = ligi(&["integrate", "--problem", "pca", "--seed", "9", "--steps", "50", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.csv");
    ligi(&["integrate", "--problem", "pca", "--seed", "10", "--steps", "50", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"problem": "duffing", "frame": "se2", "steps": 40, "h": 0.05}"#).unwrap();
    let out = ligi(&["integrate", "--config", cfg.to_str().unwrap(), "--steps", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("t,x,y,energy"));
    assert!(text.lines().nth(4).unwrap().starts_with("1.5000000000000002e-1") || text.lines().nth(4).unwrap().starts_with("1.5000000000000000e-1"));

    std::fs::write(&cfg, r#"{"problem": "duffing", "bogus": 1}"#).unwrap();
    assert_eq!(ligi(&["integrate", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn validation_failures_exit_2() {
    for args in [
        vec!["integrate", "--problem", "kepler"],
        vec!["integrate", "--problem", "frb_s2", "--h", "0"],
        vec!["integrate", "--problem", "frb_s2", "--h", "-0.1"],
        vec!["integrate", "--problem", "frb_s2", "--steps", "0"],
        vec!["integrate", "--problem", "heavytop", "--scheme", "rkmk4"],
        vec!["integrate", "--preset", "nope"],
        vec!["order", "--problem", "frb_s2", "--h-list", "0.1"],
        vec!["drift"],
    ] {
        let out = ligi(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn divergence_exits_3() {
    let out = ligi(&["integrate", "--problem", "heavytop", "--scheme", "theta", "--theta", "1", "--h", "50", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn order_reports_slopes() {
    let out = ligi(&["order", "--problem", "frb_s2", "--scheme", "rkmk4", "--h-list", "0.1,0.05,0.025,0.0125,0.00625,0.003125"]);
    assert!(out.status.success());
    let v = json(&out);
    let slope = v["slope"].as_f64().unwrap();
    assert!((3.7..=4.3).contains(&slope), "{slope}");
    assert_eq!(v["errors"].as_array().unwrap().len(), 6);
    assert_eq!(v["scheme"], "rkmk4");

    let v = json(&ligi(&["order", "--problem", "frb_s2", "--scheme", "lie_euler", "--h-list", "0.1,0.05,0.025,0.0125"]));
    assert!((0.8..=1.2).contains(&v["slope"].as_f64().unwrap()));
}

#[test]
fn order_on_the_heavy_top_uses_a_self_reference() {
    let v = json(&ligi(&[
        "order", "--problem", "heavytop", "--scheme", "slgi", "--theta", "0.5", "--h-list", "0.02,0.01,0.005", "--t-end", "0.2",
    ]));
    let slope = v["slope"].as_f64().unwrap();
    assert!((1.7..=2.3).contains(&slope), "{slope}");
}

#[test]
fn drift_classification_matches_expectations() {
    let v = json(&ligi(&["drift", "--preset", "heavytop-theta05"]));
    assert_eq!(v["invariants"][0]["name"], "energy");
    assert_eq!(v["invariants"][0]["drifting"], false);
    let v = json(&ligi(&["drift", "--preset", "heavytop-rkmk0"]));
    assert_eq!(v["invariants"][0]["drifting"], true);
    let v = json(&ligi(&["drift", "--preset", "frb-s3-dg"]));
    assert!(v["invariants"][0]["max_relative_deviation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn every_preset_runs() {
    let help = String::from_utf8(ligi(&["integrate", "--help"]).stdout).unwrap();
    let presets: Vec<&str> = help
        .split("Presets:")
        .nth(1)
        .unwrap()
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    assert!(presets.contains(&"heavytop-theta05"));
    let dir = tempfile::tempdir().unwrap();
    for p in presets {
        let path = dir.path().join(format!("{p}.csv"));
        let t = std::time::Instant::now();
        let out = ligi(&["integrate", "--preset", p, "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{p}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(t.elapsed().as_secs() < 60);
    }
}

#[test]
fn other_problems_and_schemes_run() {
    for args in [
        vec!["integrate", "--problem", "frb_s3", "--scheme", "heun_rkmk", "--steps", "10"],
        vec!["integrate", "--problem", "frb_s3", "--scheme", "dg", "--tdd", "avf", "--nodes", "3", "--steps", "10"],
        vec!["integrate", "--problem", "frb_s2", "--scheme", "rkmk", "--tableau", "gauss2", "--series-order", "8", "--steps", "10"],
        vec!["integrate", "--problem", "duffing", "--frame", "r2", "--scheme", "cf4", "--steps", "10"],
        vec!["integrate", "--problem", "torus", "--y0", "-0.5,1.0", "--steps", "10"],
        vec!["integrate", "--problem", "pca", "--spectrum", "3,2,1", "--k", "1", "--steps", "10"],
    ] {
        let out = ligi(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 12);
    }
}

#[test]
fn energy_preserving_scheme_is_second_order() {
    for tdd in ["gonzalez", "avf"] {
        let v = json(&ligi(&[
            "order", "--problem", "frb_s3", "--scheme", "dg", "--tdd", tdd, "--h-list", "0.0625,0.03125,0.015625,0.0078125", "--t-end", "1",
        ]));
        let slope = v["slope"].as_f64().unwrap();
        assert!((1.7..=2.3).contains(&slope), "{tdd}: {slope}");
    }
}
