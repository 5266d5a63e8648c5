use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use kvforge_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { kvf_string_free(p) };
    s
}

#[test]
fn bch_coefficient() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { kvf_bch(3, &mut s) }, KvfStatus::Ok);
    let word = CString::new("xy").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { kvf_series_coeff(s, word.as_ptr(), &mut c) }, KvfStatus::Ok);
    assert_eq!(take_string(c), "1/2");
    let word = CString::new("xxy").unwrap();
    assert_eq!(unsafe { kvf_series_coeff(s, word.as_ptr(), &mut c) }, KvfStatus::Ok);
    assert_eq!(take_string(c), "1/12");
    unsafe { kvf_series_free(s) };
}

#[test]
fn solve_verify_round_trip() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { kvf_solve_kv(3, 1, &mut p) }, KvfStatus::Ok);
    let mut g = ptr::null_mut();
    let name = CString::new("heisenberg3").unwrap();
    assert_eq!(unsafe { kvf_algebra_builtin(name.as_ptr(), &mut g) }, KvfStatus::Ok);
    for (version, cap) in [(1, 2), (2, 0), (3, 0), (4, 2)] {
        let mut zero = -1;
        assert_eq!(unsafe { kvf_pair_verify(p, version, g, cap, &mut zero) }, KvfStatus::Ok);
        assert_eq!(zero, 1, "version {version}");
    }
    // versions 1 and 4 need an algebra
    let mut zero = -1;
    assert_eq!(unsafe { kvf_pair_verify(p, 1, ptr::null(), 2, &mut zero) }, KvfStatus::NullPointer);
    // and enough degrees of β
    assert_eq!(unsafe { kvf_pair_verify(p, 1, g, 4, &mut zero) }, KvfStatus::Truncation);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { kvf_pair_to_json(p, &mut text) }, KvfStatus::Ok);
    let json = CString::new(take_string(text)).unwrap();
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { kvf_pair_from_json(json.as_ptr(), &mut q) }, KvfStatus::Ok);
    let mut b1 = ptr::null_mut();
    assert_eq!(unsafe { kvf_pair_component(q, 1, &mut b1) }, KvfStatus::Ok);
    let mut c = ptr::null_mut();
    let y = CString::new("y").unwrap();
    assert_eq!(unsafe { kvf_series_coeff(b1, y.as_ptr(), &mut c) }, KvfStatus::Ok);
    assert_eq!(take_string(c), "1/4");
    assert_eq!(unsafe { kvf_pair_component(q, 3, &mut b1) }, KvfStatus::InvalidArgument);
    unsafe {
        kvf_series_free(b1);
        kvf_pair_free(q);
        kvf_pair_free(p);
        kvf_algebra_free(g);
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("e8").unwrap();
    assert_eq!(unsafe { kvf_algebra_builtin(bad.as_ptr(), &mut g) }, KvfStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(kvf_last_error()) }.to_str().unwrap().to_string();
    assert!(!msg.is_empty());
    let mut s = ptr::null_mut();
    let junk = CString::new("{not json").unwrap();
    assert_eq!(unsafe { kvf_series_from_json(junk.as_ptr(), &mut s) }, KvfStatus::Parse);
    assert_eq!(unsafe { kvf_series_from_json(ptr::null(), &mut s) }, KvfStatus::NullPointer);
    let mut dim = 0usize;
    assert_eq!(unsafe { kvf_algebra_dim(ptr::null(), &mut dim) }, KvfStatus::NullPointer);
    unsafe {
        kvf_series_free(ptr::null_mut());
        kvf_string_free(ptr::null_mut());
    }
    let v = unsafe { CStr::from_ptr(kvf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include").join("kvforge.h");
    assert!(header.exists());
    let lib = target_dir().join("libkvforge_ffi.a");
    assert!(lib.exists(), "{}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "kvforge.h"

int main(void) {
    KvfSeries *s = NULL;
    if (kvf_bch(2, &s) != KVF_STATUS_OK) return 10;
    char *c = NULL;
    if (kvf_series_coeff(s, "xy", &c) != KVF_STATUS_OK) return 11;
    int ok = strcmp(c, "1/2") == 0;
    kvf_string_free(c);
    kvf_series_free(s);
    if (!ok) return 12;

    KvfPair *p = NULL;
    if (kvf_solve_kv(2, 1, &p) != KVF_STATUS_OK) return 13;
    int zero = 0;
    if (kvf_pair_verify(p, 3, NULL, 0, &zero) != KVF_STATUS_OK || zero != 1) return 14;
    kvf_pair_free(p);

    KvfAlgebra *g = NULL;
    if (kvf_algebra_builtin("nonsense", &g) != KVF_STATUS_INVALID_ARGUMENT) return 15;
    if (strlen(kvf_last_error()) == 0) return 16;
    printf("ok %s\n", kvf_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
