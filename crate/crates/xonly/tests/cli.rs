use std::fs;
use std::path::Path;

use xonly::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use xonly::Schedule;

fn xonly(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("xonly").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn synthesize_to(dir: &Path, name: &str, extra: &[&str]) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut args = vec!["synthesize", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, out, err) = xonly(&args);
    assert_eq!(code, EXIT_PASS, "{out}{err}");
    path
}

#[test]
fn presets_report_pulse_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (profile, corrections) in [("fig9a", 1), ("fig9b", 2)] {
        let path = dir.path().join("s.json");
        let (code, out, _) =
            xonly(&["synthesize", "--phi", "pi", "--profile", profile, "--out", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("core pulses: 39"));
        assert!(out.contains(&format!("correction pulses: {corrections}")));
        assert!(out.contains("locally equivalent to CNOT: true"));
        let s = Schedule::parse(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(s.pulses.len(), 39 + corrections);
        assert_eq!(s.meta.corrections.len(), corrections);
        assert_eq!(s.meta.variant_profile.len(), 11);
    }
}

#[test]
fn round_trip_over_grid() {
    let dir = tempfile::tempdir().unwrap();
    let profiles = ["fig9a", "fig9b", "custom:llllsssslls"];
    for phi in ["0.3", "pi/2", "2pi/3", "pi", "4", "6.1"] {
        for p in profiles {
            let path = synthesize_to(dir.path(), "r.json", &["--phi", phi, "--profile", p]);
            let (code, out, err) = xonly(&["verify", path.to_str().unwrap()]);
            assert_eq!(code, EXIT_PASS, "phi={phi} profile={p}\n{out}{err}");
        }
        let path = synthesize_to(dir.path(), "alt.json", &["--phi", phi, "--alt-theta1", "0.9"]);
        assert_eq!(xonly(&["verify", path.to_str().unwrap()]).0, EXIT_PASS);
    }
}

#[test]
fn perturbed_schedule_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = synthesize_to(dir.path(), "p.json", &["--phi", "pi", "--profile", "fig9b"]);
    let mut s = Schedule::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    s.pulses[7].t += 0.1;
    fs::write(&path, s.to_json()).unwrap();
    let (code, out, _) = xonly(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    assert!(out.contains("verification: FAIL"));
}

#[test]
fn site_zero_skips_g_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.json");
    fs::write(&path, r#"{"n_sites": 6, "pulses": [{"pair": [0, 1], "t": 1.0}]}"#).unwrap();
    let (code, out, _) = xonly(&["verify", path.to_str().unwrap()]);
    assert!(out.contains("g-independence check skipped"), "{out}");
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn usage_errors() {
    assert_eq!(xonly(&["synthesize", "--phi", "0"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["synthesize", "--phi", "tau"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["synthesize", "--phi", "pi", "--profile", "mixed"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["synthesize", "--phi", "pi", "--alt-theta1", "acos(1/4)"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["synthesize", "--phi", "pi", "--format", "csv"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["sweep", "u3-phi", "--points", "1"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["nogo", "--trials", "0"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["verify", "/nonexistent/schedule.json"]).0, EXIT_USAGE);
    assert_eq!(xonly(&["--help"]).0, EXIT_PASS);
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"n_sites": 6, "pulses": [{"pair": [1, 2], "t": "long"}]}"#).unwrap();
    let (code, _, err) = xonly(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("pulses[0].t"), "{err}");

    fs::write(&path, r#"{"n_sites": 6, "pulses": [{"pair": [1, 3], "t": 1.0}]}"#).unwrap();
    let (code, _, err) = xonly(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("pulses[0]"), "{err}");
}

#[test]
fn sweeps() {
    let (code, csv, _) = xonly(&["sweep", "u3-phi", "--points", "65"]);
    assert_eq!(code, EXIT_PASS);
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && *l != "t,phase")
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 65);
    assert!(rows.windows(2).all(|w| w[0].1 < w[1].1));
    assert!(rows[0].1.abs() < 1e-12 && (rows[64].1 - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    // the crossing of pi sits at t = 1.91063
    let k = rows.iter().position(|r| r.1 > std::f64::consts::PI).unwrap();
    let (a, b) = (rows[k - 1], rows[k]);
    let t_pi = a.0 + (std::f64::consts::PI - a.1) * (b.0 - a.0) / (b.1 - a.1);
    assert!((t_pi - 1.91063).abs() < 1e-2);

    let (_, csv, _) = xonly(&["sweep", "u4tilde-theta"]);
    let header = csv.lines().find(|l| l.starts_with("# max theta")).unwrap();
    let max: f64 = header.split_whitespace().nth(4).unwrap().parse().unwrap();
    assert!((max - std::f64::consts::PI / 3.0).abs() < 1e-9);
}

#[test]
fn nogo_records_seed() {
    let (code, out, _) = xonly(&["nogo", "--trials", "20", "--diagonal-trials", "5", "--seed", "42"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.starts_with("seed: 42"));
    assert_eq!(out.matches("1.0000   2.0000   1.0000").count(), 6);
    let (_, json, _) = xonly(&["nogo", "--trials", "20", "--diagonal-trials", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}

#[test]
fn outputs_are_byte_stable() {
    let runs: Vec<_> = (0..2).map(|_| xonly(&["synthesize", "--phi", "2pi/3", "--profile", "fig9a"]).1).collect();
    assert_eq!(runs[0], runs[1]);
    let runs: Vec<_> = (0..2).map(|_| xonly(&["nogo", "--trials", "10", "--diagonal-trials", "3"]).1).collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn verify_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = synthesize_to(dir.path(), "j.json", &["--phi", "1.0"]);
    let (code, out, _) = xonly(&["verify", path.to_str().unwrap(), "--format", "json", "--g", "1"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    let gate = reports[0]["gate"].as_array().unwrap();
    assert_eq!(gate.len(), 4);
    assert_eq!(gate[0][0].as_array().unwrap().len(), 2);
}
