use std::ffi::{CStr, CString};
use std::ptr;

use serde_json::Value;
use timdof_ffi::*;

fn last_error() -> String {
    let p = timdof_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = CStr::from_ptr(s).to_string_lossy().into_owned();
    timdof_string_free(s);
    owned
}

fn wyner(k: usize) -> *mut TimdofTopology {
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { timdof_topology_wyner(k, &mut t) },
        TimdofStatus::Ok
    );
    t
}

#[test]
fn wyner_bounds_through_the_abi() {
    let t = wyner(9);
    let (mut num, mut den) = (0, 0);
    unsafe {
        assert_eq!(
            timdof_achievable_dof(t, &mut num, &mut den),
            TimdofStatus::Ok
        );
        assert_eq!((num, den), (6, 1));
        assert_eq!(
            timdof_upper_bound(t, 12, &mut num, &mut den),
            TimdofStatus::Ok
        );
        assert_eq!((num, den), (6, 1));
        let mut k = 0;
        assert_eq!(timdof_topology_user_count(t, &mut k), TimdofStatus::Ok);
        assert_eq!(k, 9);
        timdof_topology_free(t);
    }
}

#[test]
fn json_round_trip_and_analysis() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(timdof_topology_cyclic_wyner(6, &mut t), TimdofStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(timdof_topology_to_json(t, &mut s), TimdofStatus::Ok);
        let json = CString::new(take_string(s)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(
            timdof_topology_from_json(json.as_ptr(), &mut back),
            TimdofStatus::Ok
        );

        let mut report = ptr::null_mut();
        assert_eq!(timdof_analyze(back, 12, 0, &mut report), TimdofStatus::Ok);
        let v: Value = serde_json::from_str(&take_string(report)).unwrap();
        assert_eq!(v["tight"], true);
        assert_eq!(v["upper"]["value"], serde_json::json!({"num": 4, "den": 1}));
        timdof_topology_free(t);
        timdof_topology_free(back);
    }
}

#[test]
fn verify_repetition_scheme() {
    let scheme = CString::new(include_str!("../../core/data/figure4_scheme.json")).unwrap();
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(timdof_topology_figure4(&mut t), TimdofStatus::Ok);
        let (mut out, mut ok) = (ptr::null_mut(), false);
        assert_eq!(
            timdof_verify_scheme(t, scheme.as_ptr(), 20, 0, &mut out, &mut ok),
            TimdofStatus::Ok
        );
        assert!(ok);
        let v: Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["dof"], serde_json::json!({"num": 3, "den": 2}));
        timdof_topology_free(t);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            timdof_topology_wyner(0, &mut t),
            TimdofStatus::InvalidArgument
        );
        assert!(t.is_null());
        assert!(last_error().contains("at least"), "{}", last_error());

        let bad = CString::new(r#"{"k": 2, "links": [[1, 1]], "extra": 1}"#).unwrap();
        assert_eq!(
            timdof_topology_from_json(bad.as_ptr(), &mut t),
            TimdofStatus::ParseError
        );
        assert!(last_error().contains("extra"), "{}", last_error());

        let (mut num, mut den) = (0, 0);
        assert_eq!(
            timdof_achievable_dof(ptr::null(), &mut num, &mut den),
            TimdofStatus::NullPointer
        );
        assert_eq!(
            timdof_topology_wyner(3, ptr::null_mut()),
            TimdofStatus::NullPointer
        );

        let t = wyner(3);
        assert_eq!(
            timdof_upper_bound(t, 12, &mut num, ptr::null_mut()),
            TimdofStatus::NullPointer
        );
        assert_eq!(
            timdof_upper_bound(t, 12, &mut num, &mut den),
            TimdofStatus::Ok
        );
        assert!(timdof_last_error_message().is_null());
        timdof_topology_free(t);
        timdof_topology_free(ptr::null_mut());
        timdof_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(timdof_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
