use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cpsd_ffi::*;

fn last_error() -> String {
    let p = cpsd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { cpsd_string_free(s) };
    out
}

#[test]
fn matrix_handle_lifecycle() {
    let json = CString::new("[[1,1],[1,1]]").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cpsd_matrix_from_json(json.as_ptr(), &mut m) },
        CpsdStatus::Ok
    );
    assert_eq!(unsafe { cpsd_matrix_dim(m) }, 2);
    let mut psd = false;
    assert_eq!(unsafe { cpsd_matrix_is_psd(m, &mut psd) }, CpsdStatus::Ok);
    assert!(psd);

    let mut member = false;
    let mut cert = ptr::null_mut();
    let st = unsafe { cpsd_cone_member(m, CpsdCone::C, 1, ptr::null(), &mut member, &mut cert) };
    assert_eq!(st, CpsdStatus::Ok);
    assert!(!member);
    let text = CString::new(take(cert)).unwrap();
    let mut valid = false;
    assert_eq!(
        unsafe { cpsd_verify_certificate(text.as_ptr(), ptr::null(), &mut valid) },
        CpsdStatus::Ok
    );
    assert!(valid);

    let st =
        unsafe { cpsd_cone_member(m, CpsdCone::C, 2, ptr::null(), &mut member, ptr::null_mut()) };
    assert_eq!(st, CpsdStatus::Ok);
    assert!(member);
    unsafe { cpsd_matrix_free(m) };
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("[[1,2],[3,4]]").unwrap();
    let mut m = ptr::null_mut();
    let st = unsafe { cpsd_matrix_from_json(bad.as_ptr(), &mut m) };
    assert_eq!(st, CpsdStatus::Parse);
    assert!(m.is_null());
    assert!(last_error().contains("symmetric"));

    let st = unsafe { cpsd_matrix_from_json(ptr::null(), &mut m) };
    assert_eq!(st, CpsdStatus::NullPointer);

    let text = CString::new("p edge 2 1\ne 1 1\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { cpsd_graph_from_dimacs(text.as_ptr(), &mut g) },
        CpsdStatus::Parse
    );
    assert!(last_error().contains("line 2"));
}

#[test]
fn resource_cap_status() {
    let json = CString::new("[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cpsd_matrix_from_json(json.as_ptr(), &mut m) },
        CpsdStatus::Ok
    );
    let limits = CpsdLimits {
        max_tuples: 5,
        max_pivots: 1000,
    };
    let mut member = false;
    let st = unsafe { cpsd_cone_member(m, CpsdCone::D, 3, &limits, &mut member, ptr::null_mut()) };
    assert_eq!(st, CpsdStatus::ResourceCap);
    unsafe { cpsd_matrix_free(m) };
}

#[test]
fn graph_and_game() {
    let text = CString::new("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { cpsd_graph_from_dimacs(text.as_ptr(), &mut g) },
        CpsdStatus::Ok
    );
    assert_eq!(unsafe { cpsd_graph_vertex_count(g) }, 3);
    assert_eq!(unsafe { cpsd_graph_edge_count(g) }, 3);
    let mut chi = 0;
    assert_eq!(
        unsafe { cpsd_graph_chromatic_number(g, 5, &mut chi) },
        CpsdStatus::Ok
    );
    assert_eq!(chi, 3);
    unsafe { cpsd_graph_free(g) };

    let text = CString::new("p edge 2 1\ne 1 2\n").unwrap();
    assert_eq!(
        unsafe { cpsd_graph_from_dimacs(text.as_ptr(), &mut g) },
        CpsdStatus::Ok
    );
    let mut t = 0;
    let mut cert = ptr::null_mut();
    let st = unsafe { cpsd_game_solve(g, CpsdVariant::Q, 3, 2, 4, ptr::null(), &mut t, &mut cert) };
    assert_eq!(st, CpsdStatus::Ok);
    assert_eq!(t, 2);
    let text = CString::new(take(cert)).unwrap();
    let mut valid = false;
    unsafe { cpsd_verify_certificate(text.as_ptr(), ptr::null(), &mut valid) };
    assert!(valid);
    unsafe { cpsd_graph_free(g) };
}

#[test]
fn tuple_count_string() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { cpsd_count_tuples(2, 2, &mut s) }, CpsdStatus::Ok);
    assert_eq!(take(s), "14");
}

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/cpsd.h")).unwrap();
    for name in [
        "cpsd_last_error",
        "cpsd_matrix_from_json",
        "cpsd_matrix_free",
        "cpsd_cone_member",
        "cpsd_game_solve",
        "cpsd_verify_certificate",
        "typedef struct CpsdMatrix CpsdMatrix",
        "CPSD_STATUS_RESOURCE_CAP = 4",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

// Compiles and runs a small C program against the static library when a C
// compiler is on PATH.
#[test]
fn c_program_links_against_header() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| dir.join("../../target"));
    let profile = if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    };
    let lib = target.join(profile).join("libcpsd_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "cpsd.h"
int main(void) {
    CpsdMatrix *m = NULL;
    if (cpsd_matrix_from_json("[[0,-1],[-1,0]]", &m) != CPSD_STATUS_OK) return 1;
    bool member = true;
    char *cert = NULL;
    if (cpsd_cone_member(m, CPSD_CONE_D, 2, NULL, &member, &cert) != CPSD_STATUS_OK) return 2;
    if (member) return 3;
    bool valid = false;
    if (cpsd_verify_certificate(cert, NULL, &valid) != CPSD_STATUS_OK || !valid) return 4;
    cpsd_string_free(cert);
    cpsd_matrix_free(m);
    if (cpsd_matrix_from_json("nope", &m) != CPSD_STATUS_PARSE) return 5;
    if (cpsd_last_error() == NULL) return 6;
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.path().join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
