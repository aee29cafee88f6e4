use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str = "axis,J,gamma,D,r,mz,xx,yy,zz,qfi,c_l1,c_rec,d_qfi,d_c_l1,d_c_rec";
const SWEEP: &str = "# minimal sweep\naxis = J\nstart = 0\nstop = 2\nstep = 0.05\ngamma = 1\nD = 0\nr = 1\n";

fn spinchain(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinchain"));
    cmd.args(args).env_remove("SPINCHAIN_THREADS");
    if let Some(t) = threads {
        cmd.env("SPINCHAIN_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_writes_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "sweep.cfg", SWEEP);
    let out = spinchain(&["sweep", "--config", &cfg], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 42);
    assert_eq!(lines[0], HEADER);
    assert!(lines[1].starts_with("J,0.000000000000,1.000000000000,0.000000000000,1,1.000000000000,"));
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 15, "{line}");
    }
}

#[test]
fn sweep_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in [None, Some("1"), None].into_iter().enumerate() {
        let file = dir.path().join(format!("out{i}.csv"));
        let body = format!("{SWEEP}output = {}\n", file.display());
        let cfg = write_config(dir.path(), &format!("s{i}.cfg"), &body);
        let out = spinchain(&["sweep", "--config", &cfg], threads);
        assert!(out.status.success());
        outputs.push(fs::read(&file).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn precision_key_controls_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p.cfg", &format!("{SWEEP}precision = 4\n"));
    let text = String::from_utf8(spinchain(&["sweep", "--config", &cfg], None).stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("J,0.0000,1.0000,0.0000,1,1.0000,"));
}

#[test]
fn unknown_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", &SWEEP.replace("axis = J", "axix = J"));
    let out = spinchain(&["sweep", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("axix") && err.contains("line 2"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn missing_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", &SWEEP.replace("step = 0.05\n", ""));
    let out = spinchain(&["sweep", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}

#[test]
fn bad_thread_override_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.cfg", SWEEP);
    for bad in ["0", "many", "-2"] {
        let out = spinchain(&["sweep", "--config", &cfg], Some(bad));
        assert_eq!(out.status.code(), Some(3), "{bad}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("SPINCHAIN_THREADS"));
    }
}

#[test]
fn point_prints_measures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "pt.cfg", "J = 0\ngamma = 0.5\nD = 0.3\nr = 2\n");
    let out = spinchain(&["point", "--config", &cfg], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["mz = 1.000000000000", "zz = 1.000000000000", "qfi = 8.000000000000", "c_l1 = 0.000000000000"] {
        assert!(text.lines().any(|l| l == line), "{line} missing from\n{text}");
    }
}

#[test]
fn out_of_range_rows_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let body = "axis = gamma\nstart = 0.5\nstop = 1.5\nstep = 0.25\nJ = 0.5\nD = 0\nr = 1\n";
    let cfg = write_config(dir.path(), "g.cfg", body);
    let out = spinchain(&["sweep", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().last().unwrap().contains("nan"));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn figures_subset_written_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("figs");
    let cfg = write_config(dir.path(), "f.cfg", &format!("figures = 3\noutput = {}\n", target.display()));
    let out = spinchain(&["figures", "--config", &cfg], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut names: Vec<String> = fs::read_dir(&target)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["fig3_D0.5.csv", "fig3_D0.csv", "fig3_D1.csv"]);
    let text = fs::read_to_string(target.join("fig3_D0.csv")).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
}

#[test]
fn config_is_required_for_sweep() {
    let out = spinchain(&["sweep"], None);
    assert_eq!(out.status.code(), Some(2));
}
