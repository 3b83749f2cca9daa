use std::ffi::{CStr, CString};
use std::ptr;

use kfulton_ffi::*;

fn spec(json: &str) -> *mut KfSpec {
    let text = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { kf_spec_from_json(text.as_ptr(), &mut out) };
    assert_eq!(status, KfStatus::Ok);
    out
}

fn last_error() -> String {
    let p = kf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn fulton_class_round_trip() {
    let s = spec(r#"{"variables":["x","y"],"ideal":["x^2","x*y","y^2"]}"#);
    unsafe {
        assert_eq!(kf_spec_dim(s), 2);
        let mut class = ptr::null_mut();
        assert_eq!(kf_fulton_class(s, &mut class), KfStatus::Ok);
        assert_eq!(kf_fulton_degree(class), 1);

        let mut len = 0;
        assert_eq!(kf_fulton_coeffs(class, ptr::null_mut(), 0, &mut len), KfStatus::BufferTooSmall);
        assert_eq!(len, 2);
        let mut buf = [0i64; 4];
        assert_eq!(kf_fulton_coeffs(class, buf.as_mut_ptr(), buf.len(), &mut len), KfStatus::Ok);
        assert_eq!(&buf[..len], &[3, 1]);

        let mut json = ptr::null_mut();
        assert_eq!(kf_fulton_to_json(class, &mut json), KfStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        kf_string_free(json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["text"], "3 + t");

        kf_fulton_free(class);
        kf_spec_free(s);
    }
}

#[test]
fn virtual_chi_of_regular_sections() {
    let s = spec(r#"{"variables":["x","y"],"ideal":["x^2","y^2"],"sections":["x^2","y^2"]}"#);
    let mut chi = 0;
    unsafe {
        assert_eq!(kf_virtual_chi(s, &mut chi), KfStatus::Ok);
        kf_spec_free(s);
    }
    assert_eq!(chi, 4);
}

#[test]
fn virtual_chi_needs_sections() {
    let s = spec(r#"{"variables":["x"],"ideal":["x^2"]}"#);
    let mut chi = 0;
    unsafe {
        assert_eq!(kf_virtual_chi(s, &mut chi), KfStatus::InputError);
        kf_spec_free(s);
    }
    assert!(last_error().contains("sections"));
}

#[test]
fn bad_input_reports_an_error() {
    let text = CString::new(r#"{"variables":["x"],"ideal":["x^"]}"#).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { kf_spec_from_json(text.as_ptr(), &mut out) };
    assert_eq!(status, KfStatus::InputError);
    assert!(out.is_null());
    assert!(last_error().contains("ideal[0]"));
}

#[test]
fn non_artinian_scheme_is_an_input_error() {
    let s = spec(r#"{"variables":["x","y"],"ideal":["x*y"]}"#);
    let mut class = ptr::null_mut();
    unsafe {
        assert_eq!(kf_fulton_class(s, &mut class), KfStatus::InputError);
        assert!(class.is_null());
        kf_spec_free(s);
    }
}

#[test]
fn null_arguments_are_rejected() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(kf_spec_from_json(ptr::null(), &mut out), KfStatus::NullArgument);
        assert_eq!(kf_fulton_class(ptr::null(), ptr::null_mut()), KfStatus::NullArgument);
        assert_eq!(kf_fulton_degree(ptr::null()), 0);
        kf_spec_free(ptr::null_mut());
        kf_fulton_free(ptr::null_mut());
        kf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kfulton.h")).unwrap();
    for name in [
        "kf_spec_from_json",
        "kf_spec_free",
        "kf_fulton_class",
        "kf_fulton_coeffs",
        "kf_virtual_chi",
        "kf_last_error_message",
        "KF_STATUS_RESOURCE_LIMIT",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
