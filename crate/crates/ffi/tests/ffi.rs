use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use g2cover_ffi::*;

fn last_error() -> String {
    let p = g2_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { g2_string_free(p) };
    s
}

fn workbench() -> *mut G2Workbench {
    let mut wb = ptr::null_mut();
    assert_eq!(unsafe { g2_workbench_new(2, &mut wb) }, G2Status::Ok);
    wb
}

#[test]
fn workbench_rejects_odd_characteristic() {
    let mut wb = ptr::null_mut();
    assert_eq!(unsafe { g2_workbench_new(3, &mut wb) }, G2Status::Config);
    assert!(wb.is_null());
    assert!(last_error().contains("power of 2"));
    assert_eq!(unsafe { g2_workbench_new(2, ptr::null_mut()) }, G2Status::NullPointer);
    assert!(last_error().contains("out"));
}

#[test]
fn geometry_counts_and_pi1() {
    let wb = workbench();
    for (v, counts, t) in [(2u8, [63usize, 336, 756], 1u64), (3, [63, 252, 72], 1), (1, [63, 336, 504], 3)] {
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { g2_geometry_build(wb, v, &mut g) }, G2Status::Ok);
        for (ty, &c) in (1u8..=3).zip(counts.iter()) {
            let mut n = 0usize;
            assert_eq!(unsafe { g2_geometry_count(g, ty, &mut n) }, G2Status::Ok);
            assert_eq!(n, c);
        }
        let (mut order, mut finite) = (0u64, false);
        assert_eq!(unsafe { g2_geometry_pi1_order(g, 1_000_000, &mut order, &mut finite) }, G2Status::Ok);
        assert!(finite);
        assert_eq!(order, t);
        assert_eq!(unsafe { g2_geometry_pi1_order(g, 2, &mut order, &mut finite) }, G2Status::Ok);
        assert_eq!(finite, t == 1);
        unsafe { g2_geometry_free(g) };
    }
    unsafe { g2_workbench_free(wb) };
}

#[test]
fn json_round_trip_and_parse_errors() {
    let wb = workbench();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { g2_geometry_build(wb, 3, &mut g) }, G2Status::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { g2_geometry_to_json(g, &mut s) }, G2Status::Ok);
    let text = take_string(s);
    let c = CString::new(text.clone()).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { g2_geometry_from_json(c.as_ptr(), &mut h) }, G2Status::Ok);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { g2_geometry_to_json(h, &mut s2) }, G2Status::Ok);
    assert_eq!(take_string(s2), text);

    let bad = CString::new("{\"elements\": 5}").unwrap();
    let mut x = ptr::null_mut();
    assert_eq!(unsafe { g2_geometry_from_json(bad.as_ptr(), &mut x) }, G2Status::Parse);
    assert!(x.is_null());
    assert!(last_error().contains("invalid geometry JSON"));
    assert_eq!(unsafe { g2_geometry_from_json(ptr::null(), &mut x) }, G2Status::NullPointer);
    unsafe {
        g2_geometry_free(g);
        g2_geometry_free(h);
        g2_workbench_free(wb);
    }
}

#[test]
fn census_and_certificate() {
    let wb = workbench();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { g2_census_json(wb, &mut s) }, G2Status::Ok);
    let census: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(census["plane_counts"]["total"], 1395);

    let mut concluded = false;
    assert_eq!(unsafe { g2_certify_json(wb, 2, 1_000_000, &mut concluded, &mut s) }, G2Status::Ok);
    assert!(concluded);
    let cert: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(cert["conclusion"], "U(A) ≅ G2(2)");
    assert_eq!(unsafe { g2_certify_json(wb, 1, 1_000_000, &mut concluded, &mut s) }, G2Status::Ok);
    assert!(!concluded);
    take_string(s);
    assert_eq!(unsafe { g2_certify_json(wb, 5, 1_000_000, &mut concluded, &mut s) }, G2Status::Config);
    unsafe { g2_workbench_free(wb) };
}

#[test]
fn frees_accept_null_and_errors_are_thread_local() {
    unsafe {
        g2_workbench_free(ptr::null_mut());
        g2_geometry_free(ptr::null_mut());
        g2_string_free(ptr::null_mut());
    }
    let mut wb = ptr::null_mut();
    assert_eq!(unsafe { g2_workbench_new(5, &mut wb) }, G2Status::Config);
    let other = std::thread::spawn(|| g2_last_error_message().is_null()).join().unwrap();
    assert!(other);
    assert!(!g2_last_error_message().is_null());
    let v = unsafe { CStr::from_ptr(g2_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_current_and_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/g2cover.h")).unwrap();
    for name in [
        "g2_workbench_new",
        "g2_workbench_free",
        "g2_census_json",
        "g2_geometry_build",
        "g2_geometry_from_json",
        "g2_geometry_to_json",
        "g2_geometry_count",
        "g2_geometry_pi1_order",
        "g2_certify_json",
        "g2_string_free",
        "g2_last_error_message",
        "G2_STATUS_NULL_POINTER",
    ] {
        assert!(header.contains(name), "{name} missing from the header");
    }
}

/// Compiles and runs a C program against the header and the shared library.
#[test]
fn c_program_links_and_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let libdir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    if !libdir.join("libg2cover_ffi.so").exists() {
        eprintln!("skipping: shared library not found in {}", libdir.display());
        return;
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let out = std::env::temp_dir().join(format!("g2cover-smoke-{}", std::process::id()));
    let status = match Command::new(&cc)
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg("-L")
        .arg(&libdir)
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .arg("-lg2cover_ffi")
        .arg("-o")
        .arg(&out)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({cc}): {e}");
            return;
        }
    };
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
