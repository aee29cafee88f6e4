use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use spinchain_ffi::*;

fn params(j: f64, gamma: f64, d: f64) -> SpinchainParams {
    SpinchainParams { j, gamma, d }
}

#[test]
fn polarized_point() {
    let mut c = SpinchainCorrelations::default();
    let mut m = SpinchainMeasures::default();
    unsafe {
        assert_eq!(spinchain_correlations(params(0.0, 0.5, 0.3), 2, &mut c), SpinchainStatus::Ok);
        assert_eq!(spinchain_measures(params(0.0, 0.5, 0.3), 2, &mut m), SpinchainStatus::Ok);
    }
    assert_eq!(c.r, 2);
    assert!((c.mz - 1.0).abs() < 1e-12 && (c.zz - 1.0).abs() < 1e-12);
    assert!((m.qfi - 8.0).abs() < 1e-10 && m.c_l1.abs() < 1e-12 && m.c_rec.abs() < 1e-12);
}

#[test]
fn error_codes() {
    let mut c = SpinchainCorrelations::default();
    unsafe {
        assert_eq!(spinchain_correlations(params(1.0, 1.0, 0.0), 1, ptr::null_mut()), SpinchainStatus::NullPointer);
        assert_eq!(spinchain_correlations(params(1.0, 2.0, 0.0), 1, &mut c), SpinchainStatus::InvalidParameter);
        assert_eq!(spinchain_correlations(params(f64::NAN, 1.0, 0.0), 1, &mut c), SpinchainStatus::InvalidParameter);
        assert_eq!(spinchain_correlations(params(1.0, 1.0, 0.0), 0, &mut c), SpinchainStatus::InvalidSeparation);
        assert_eq!(spinchain_correlations(params(1.0, 1.0, 0.0), 101, &mut c), SpinchainStatus::InvalidSeparation);
    }
}

#[test]
fn sweep_handle_lifecycle() {
    let mut handle: *mut SpinchainSweep = ptr::null_mut();
    unsafe {
        let status = spinchain_sweep_new(SpinchainAxis::J, 0.0, 2.0, 0.01, params(99.0, 1.0, 0.0), 1, &mut handle);
        assert_eq!(status, SpinchainStatus::Ok);
        assert!(!handle.is_null());
        assert_eq!(spinchain_sweep_len(handle), 201);

        let mut row = std::mem::zeroed::<SpinchainRow>();
        assert_eq!(spinchain_sweep_row(handle, 0, &mut row), SpinchainStatus::Ok);
        assert_eq!(row.status, SpinchainStatus::Ok);
        assert_eq!(row.params, params(0.0, 1.0, 0.0));
        assert!((row.measures.qfi - 8.0).abs() < 1e-10);
        assert!(row.derivatives.c_l1.is_finite());
        assert_eq!(spinchain_sweep_row(handle, 201, &mut row), SpinchainStatus::OutOfRange);
        assert_eq!(spinchain_sweep_row(handle, 0, ptr::null_mut()), SpinchainStatus::NullPointer);

        let mut j_star = 0.0;
        assert_eq!(spinchain_sweep_critical_point(handle, SpinchainMeasure::Qfi, &mut j_star), SpinchainStatus::Ok);
        assert!((0.98..=1.02).contains(&j_star), "{j_star}");

        spinchain_sweep_free(handle);
        spinchain_sweep_free(ptr::null_mut());
        assert_eq!(spinchain_sweep_len(ptr::null()), 0);
    }
}

#[test]
fn flagged_rows_and_bad_sweeps() {
    let mut handle: *mut SpinchainSweep = ptr::null_mut();
    unsafe {
        // gamma grid leaving [-1, 1]: last rows flagged, handle still built.
        let status = spinchain_sweep_new(SpinchainAxis::Gamma, 0.5, 1.5, 0.25, params(0.5, 0.0, 0.0), 1, &mut handle);
        assert_eq!(status, SpinchainStatus::Ok);
        let mut row = std::mem::zeroed::<SpinchainRow>();
        assert_eq!(spinchain_sweep_row(handle, 4, &mut row), SpinchainStatus::Ok);
        assert_eq!(row.status, SpinchainStatus::InvalidParameter);
        assert!(row.measures.qfi.is_nan());
        let mut j_star = 0.0;
        assert_eq!(
            spinchain_sweep_critical_point(handle, SpinchainMeasure::L1, &mut j_star),
            SpinchainStatus::InvalidSweep
        );
        spinchain_sweep_free(handle);

        let mut other: *mut SpinchainSweep = ptr::null_mut();
        let status = spinchain_sweep_new(SpinchainAxis::J, 1.0, 0.0, 0.1, params(0.0, 1.0, 0.0), 1, &mut other);
        assert_eq!(status, SpinchainStatus::InvalidSweep);
        assert!(other.is_null());
        let status = spinchain_sweep_new(SpinchainAxis::J, 0.0, 1.0, 0.1, params(0.0, 1.0, 0.0), 1, ptr::null_mut());
        assert_eq!(status, SpinchainStatus::NullPointer);
    }
}

#[test]
fn messages_are_static_strings() {
    for status in [SpinchainStatus::Ok, SpinchainStatus::InvalidSweep, SpinchainStatus::Internal] {
        let msg = unsafe { CStr::from_ptr(spinchain_status_message(status)) };
        assert!(!msg.to_str().unwrap().is_empty());
    }
    let version = unsafe { CStr::from_ptr(spinchain_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spinchain.h")
}

#[test]
fn header_declares_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "spinchain_correlations",
        "spinchain_measures",
        "spinchain_sweep_new",
        "spinchain_sweep_len",
        "spinchain_sweep_row",
        "spinchain_sweep_critical_point",
        "spinchain_sweep_free",
        "spinchain_status_message",
        "typedef struct SpinchainSweep SpinchainSweep;",
        "SPINCHAIN_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include "spinchain.h"

int main(void) {
    SpinchainParams p = {0.0, 0.5, 0.0};
    SpinchainMeasures m;
    if (spinchain_measures(p, 1, &m) != SPINCHAIN_STATUS_OK) return 1;
    SpinchainSweep *s = NULL;
    if (spinchain_sweep_new(SPINCHAIN_AXIS_J, 0.0, 1.0, 0.1, p, 1, &s) != SPINCHAIN_STATUS_OK) return 2;
    size_t n = spinchain_sweep_len(s);
    spinchain_sweep_free(s);
    printf("%.6f %zu\n", m.qfi, n);
    return n == 11 ? 0 : 3;
}
"#;

/// Compiles a C program against the generated header; when a C compiler is
/// present, also links it against the shared library and runs it.
#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, C_SMOKE).unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success(), "header does not compile as C99");

    // target/<profile>/ holds the cdylib next to the test's deps directory.
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    if !profile_dir.join("libspinchain_ffi.so").exists() {
        eprintln!("shared library not built; skipping link step");
        return;
    }
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg("-L")
        .arg(profile_dir)
        .arg("-lspinchain_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "link failed");
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", profile_dir).output().unwrap();
    assert!(out.status.success(), "smoke program failed: {out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "8.000000 11");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
