use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use qwalk_ffi::*;

fn last_error() -> String {
    let p = qw_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn steps(text: &str) -> *mut QwStepSet {
    let c = CString::new(text).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qw_stepset_parse(c.as_ptr(), &mut s) }, QwStatus::Ok);
    s
}

#[test]
fn classify_and_count() {
    let s = steps("NE,W,S");
    let (mut kind, mut order) = (QwModelKind::Trivial, 0);
    assert_eq!(unsafe { qw_classify(s, &mut kind, &mut order) }, QwStatus::Ok);
    assert_eq!(kind, QwModelKind::NonSingular);
    assert_eq!(order, 6);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { qw_count_table_new(s, 9, &mut t) }, QwStatus::Ok);
    let mut v = 0.0;
    // Kreweras excursions of length 9: 4^3 C(9,3) / (4 * 7) = 192
    assert_eq!(unsafe { qw_count_table_get(t, 0, 0, 9, &mut v) }, QwStatus::Ok);
    assert_eq!(v, 192.0);
    assert_eq!(unsafe { qw_count_table_get(t, 0, 0, 10, &mut v) }, QwStatus::InvalidInput);
    unsafe {
        qw_count_table_free(t);
        qw_stepset_free(s);
    }
}

#[test]
fn model_round_trip() {
    let s = steps("NE,W,S");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qw_model_new(s, 0.1, 64, 1e-8, &mut m) }, QwStatus::Ok);
    let (mut z, mut k, mut l) = (0.0, 0, 0);
    assert_eq!(unsafe { qw_model_weight(m, &mut z, &mut k, &mut l) }, QwStatus::Ok);
    assert_eq!((z, k, l), (0.1, 2, 3));
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    assert_eq!(unsafe { qw_model_periods(m, &mut a, &mut b, &mut c) }, QwStatus::Ok);
    assert!((c / b - 2.0 / 3.0).abs() < 1e-9 && a > 0.0);
    let (mut q, mut closed) = (0.0, 0.0);
    assert_eq!(unsafe { qw_model_q00(m, &mut q, ptr::null_mut()) }, QwStatus::Ok);
    assert_eq!(unsafe { qw_kreweras_q00_closed(0.1, &mut closed) }, QwStatus::Ok);
    assert!((q - closed).abs() < 1e-9);
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(unsafe { qw_model_evaluate_qx0(m, 0.3, 0.0, 1, &mut re, &mut im) }, QwStatus::Ok);
    assert!((re - 1.0050589008201727).abs() < 1e-8 && im.abs() < 1e-10);
    unsafe {
        qw_model_free(m);
        qw_stepset_free(s);
    }
}

#[test]
fn pinned_model() {
    let s = steps("W,SW,S,NE");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qw_model_new_pinned(s, 28, 37, &mut m) }, QwStatus::Ok);
    let (mut z, mut k, mut l) = (0.0, 0, 0);
    unsafe { qw_model_weight(m, &mut z, &mut k, &mut l) };
    assert_eq!((k, l), (28, 37));
    assert!((z - 0.21498642240223376).abs() < 1e-12);
    let mut m2 = ptr::null_mut();
    assert_eq!(unsafe { qw_model_new_pinned(s, 1, 3, &mut m2) }, QwStatus::Numeric);
    assert!(last_error().contains("not attained"));
    assert!(m2.is_null());
    unsafe {
        qw_model_free(m);
        qw_stepset_free(s);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("NE,XX").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qw_stepset_parse(bad.as_ptr(), &mut s) }, QwStatus::InvalidInput);
    assert!(last_error().contains("XX"));
    assert_eq!(unsafe { qw_stepset_parse(ptr::null(), &mut s) }, QwStatus::NullPointer);
    let good = CString::new("NE,W,S").unwrap();
    assert_eq!(unsafe { qw_stepset_parse(good.as_ptr(), ptr::null_mut()) }, QwStatus::NullPointer);

    let s = steps("W,SW,S,NE");
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qw_model_new(s, 0.2, 8, 1e-8, &mut m) }, QwStatus::NotRational);
    assert_eq!(unsafe { qw_model_new(s, 0.3, 64, 1e-8, &mut m) }, QwStatus::InvalidInput);
    let mut q = 0.0;
    assert_eq!(unsafe { qw_model_q00(ptr::null(), &mut q, ptr::null_mut()) }, QwStatus::NullPointer);
    assert_eq!(unsafe { qw_kreweras_q00_closed(0.5, &mut q) }, QwStatus::InvalidInput);
    // success clears the message
    assert_eq!(unsafe { qw_kreweras_q00_closed(0.1, &mut q) }, QwStatus::Ok);
    assert!(qw_last_error_message().is_null());
    unsafe {
        qw_stepset_free(s);
        qw_stepset_free(ptr::null_mut());
        qw_model_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(qw_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qwalk.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "qw_stepset_parse",
        "qw_classify",
        "qw_model_new_pinned",
        "qw_model_evaluate_qx0",
        "qw_last_error_message",
        "QW_STATUS_NOT_RATIONAL",
        "typedef struct QwModel QwModel",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "qwalk.h"
int main(void) {
    QwStepSet *s = NULL;
    QwModel *m = NULL;
    double q = 0.0, closed = 0.0;
    if (qw_stepset_parse("NE,W,S", &s) != QW_STATUS_OK) return 1;
    if (qw_model_new(s, 0.1, 64, 1e-8, &m) != QW_STATUS_OK) return 2;
    if (qw_model_q00(m, &q, NULL) != QW_STATUS_OK) return 3;
    qw_kreweras_q00_closed(0.1, &closed);
    if (fabs(q - closed) > 1e-9) return 4;
    if (qw_stepset_parse("bogus", &s) != QW_STATUS_INVALID_INPUT) return 5;
    printf("%.12f %s\n", q, qw_last_error_message());
    qw_model_free(m);
    qw_stepset_free(s);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libqwalk_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {} not built", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("qwalk-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.join("smoke");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.starts_with("1.002016194"), "{text}");
    let _ = std::fs::remove_dir_all(&dir);
}
