mod common;

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solenoid-dim")).args(args).output().unwrap()
}

fn spec(name: &str) -> String {
    common::fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_reports_both_hypotheses() {
    let o = run(&["check", "--spec", &spec("strong_005.cfg"), "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("tstar_ok,true") && out.contains("estar_ok,true"));
    let mu0: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("mu0,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((mu0 - 0.3758036494182152).abs() < 1e-12);
}

#[test]
fn bowen_prints_the_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = run(&["bowen", "--spec", &spec("interval_02.cfg"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let d0: f64 = stdout(&o).trim().strip_prefix("d0 = ").unwrap().parse().unwrap();
    assert!((d0 - 0.430676558073393).abs() < 1e-9);
    let csv = std::fs::read_to_string(out).unwrap();
    assert!(csv.contains("# timestamp = "));
    assert!(csv.lines().any(|l| l == "d0,bracket_width,depth,iterations"));
}

#[test]
fn unknown_key_exits_with_parse_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(common::fixture("sw_02.cfg")).unwrap().replace("e_radius", "e_radus");
    std::fs::write(&path, text).unwrap();
    let o = run(&["check", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("e_radus"));
}

#[test]
fn error_classes_have_distinct_codes() {
    let sw = spec("sw_02.cfg");
    assert_eq!(run(&["attrdim", "--spec", &sw, "--budget", "10"]).status.code(), Some(3));
    assert_eq!(run(&["transversality", "--spec", &sw]).status.code(), Some(4));
    assert_eq!(run(&["check", "--spec", "/nonexistent/spec.cfg"]).status.code(), Some(5));
    assert_eq!(run(&["bowen", "--spec", &sw, "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate", "--spec", &sw]).status.code(), Some(2));
    assert_eq!(run(&["dxm", "--spec", &sw, "--x", "0.1,0.2"]).status.code(), Some(2));
}

#[test]
fn invalid_spec_exits_with_its_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weak.cfg");
    let text = std::fs::read_to_string(common::fixture("interval_02.cfg"))
        .unwrap()
        .replace("lambda = 0 : 0.2, 0.0", "lambda = 0 : 1.5, 0.0");
    std::fs::write(&path, text).unwrap();
    assert_eq!(run(&["check", "--spec", path.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let cases: [(&str, &str, &[&str]); 4] = [
        ("pressure", "variable.cfg", &["--depth", "10"]),
        ("slicedim", "sw_02.cfg", &["--depth", "10"]),
        ("attrdim", "sw_02.cfg", &["--depth", "6", "--grid", "256"]),
        ("export-cloud", "rotating.cfg", &["--depth", "5", "--grid", "8"]),
    ];
    let dir = tempfile::tempdir().unwrap();
    for (cmd, file, extra) in cases {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let out = dir.path().join(format!("{cmd}-{threads}.csv"));
            let mut args: Vec<String> = [cmd, "--spec", &spec(file), "--no-timestamp", "--threads", threads]
                .iter()
                .map(|s| s.to_string())
                .collect();
            args.extend(extra.iter().map(|s| s.to_string()));
            args.extend(["--out".to_string(), out.to_string_lossy().into_owned()]);
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            assert_eq!(run(&args).status.code(), Some(0), "{cmd}");
            outputs.push(std::fs::read(out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
        assert!(!String::from_utf8_lossy(&outputs[0]).contains("timestamp"));
    }
}

#[test]
fn export_cloud_slice_has_header_and_rows() {
    let o = run(&["export-cloud", "--spec", &spec("sw_02.cfg"), "--x", "0.25", "--depth", "3", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "x0,y0,y1,z0,word_index,grid_index");
    assert_eq!(rows.len(), 9);
}
