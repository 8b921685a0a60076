use std::ffi::{CStr, CString};
use std::ptr;

use sl2lab_ffi::*;

fn builtin(name: &str) -> *mut Sl2GenSet {
    let n = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sl2_genset_builtin(n.as_ptr(), &mut s) }, Sl2Status::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let p = sl2_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn lubotzky_gamma_and_report() {
    let s = builtin("lubotzky");
    assert_eq!(unsafe { sl2_genset_len(s) }, 4);
    let (mut a, mut b, mut c, mut d) = (0.0, 0.0, 0.0, 0.0);
    assert_eq!(unsafe { sl2_gamma(s, &mut a, &mut b, &mut c, &mut d) }, Sl2Status::Ok);
    assert!(0.7005 <= a && a <= b && b <= 0.7006);
    assert!(c <= d && d <= 1.0 / 32.0);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sl2_gap_bound_json(s, &mut json) }, Sl2Status::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { sl2_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "sl2lab.bound-report/1");
    assert_eq!(v["binding_threshold"], "flattening_constant");
    unsafe { sl2_genset_free(s) };
}

#[test]
fn graph_measurements() {
    let s = builtin("lubotzky");
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sl2_graph_new(13, s, &mut g) }, Sl2Status::Ok);
    assert_eq!(unsafe { sl2_graph_order(g) }, 2184);
    let mut diam = 0;
    assert_eq!(unsafe { sl2_graph_diameter(g, &mut diam) }, Sl2Status::Ok);
    assert_eq!(diam, 9);
    let mut girth = 0;
    assert_eq!(unsafe { sl2_graph_girth(g, &mut girth) }, Sl2Status::Ok);
    assert_eq!(girth, 10);
    let (mut l1, mut rho) = (0.0, 0.0);
    assert_eq!(
        unsafe { sl2_graph_spectrum(g, Sl2Method::Dense, 0, &mut l1, &mut rho) },
        Sl2Status::Ok
    );
    let (mut l2, mut rho2) = (0.0, 0.0);
    assert_eq!(
        unsafe { sl2_graph_spectrum(g, Sl2Method::Iterative, 5, &mut l2, &mut rho2) },
        Sl2Status::Ok
    );
    assert!(l1 > 0.0 && (l1 - l2).abs() < 1e-8 && (rho - rho2).abs() < 1e-8);
    unsafe {
        sl2_graph_free(g);
        sl2_genset_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    let s = builtin("lubotzky");
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { sl2_graph_new(3, s, &mut g) }, Sl2Status::Domain);
    assert!(g.is_null());
    assert!(last_error().contains("identity"));

    let bad = CString::new("[[1,2],[3,4]]").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { sl2_genset_parse(bad.as_ptr(), true, &mut t) }, Sl2Status::Domain);
    let junk = CString::new("not a matrix").unwrap();
    assert_eq!(unsafe { sl2_genset_parse(junk.as_ptr(), true, &mut t) }, Sl2Status::Parse);

    let name = CString::new("nope").unwrap();
    assert_eq!(unsafe { sl2_genset_builtin(name.as_ptr(), &mut t) }, Sl2Status::InvalidArgument);
    assert_eq!(unsafe { sl2_genset_builtin(ptr::null(), &mut t) }, Sl2Status::NullPointer);
    assert_eq!(unsafe { sl2_genset_len(ptr::null()) }, 0);
    unsafe {
        sl2_genset_free(ptr::null_mut());
        sl2_graph_free(ptr::null_mut());
        sl2_string_free(ptr::null_mut());
        sl2_genset_free(s);
    }
}

#[test]
fn parsed_set_closes_inverses() {
    let text = CString::new("[[1,3],[0,1]]\n[[1,0],[3,1]]\n").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sl2_genset_parse(text.as_ptr(), false, &mut s) }, Sl2Status::Domain);
    assert_eq!(unsafe { sl2_genset_parse(text.as_ptr(), true, &mut s) }, Sl2Status::Ok);
    assert_eq!(unsafe { sl2_genset_len(s) }, 4);
    unsafe { sl2_genset_free(s) };
}

#[test]
fn babai_enclosure() {
    let (mut lo, mut hi) = (0.0, 0.0);
    assert_eq!(unsafe { sl2_babai_constant(&mut lo, &mut hi) }, Sl2Status::Ok);
    assert!(3322.0 <= lo && lo <= hi && hi <= 3323.0);
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sl2lab.h")).unwrap();
    for name in [
        "sl2_last_error",
        "sl2_genset_builtin",
        "sl2_gap_bound_json",
        "sl2_graph_spectrum",
        "SL2_STATUS_NO_CONVERGENCE",
        "typedef struct Sl2Graph Sl2Graph",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}
