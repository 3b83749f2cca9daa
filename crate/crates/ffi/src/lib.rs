//! C interface to kfulton.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns a [`KfStatus`];
//! on failure [`kf_last_error_message`] describes what went wrong on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kfulton::fulton::{fulton_class, FultonClass, FultonOptions};
use kfulton::specfile::LoadedSpec;
use kfulton::virtual_sheaf::{verify_ksiebert, VirtualOptions};
use kfulton::{Error, ErrorClass};

/// Outcome of a call. The first four values match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    PropertyViolation = 1,
    InputError = 2,
    ResourceLimit = 3,
    NullArgument = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A parsed and validated scheme file.
pub struct KfSpec {
    loaded: LoadedSpec,
}

/// A computed Fulton class.
pub struct KfFulton {
    class: FultonClass,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> KfStatus {
    set_error(err.to_string());
    match err.class() {
        ErrorClass::PropertyViolation => KfStatus::PropertyViolation,
        ErrorClass::InputError => KfStatus::InputError,
        ErrorClass::ResourceLimit => KfStatus::ResourceLimit,
    }
}

fn guarded(f: impl FnOnce() -> KfStatus) -> KfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            KfStatus::Panic
        }
    }
}

fn null_argument(name: &str) -> KfStatus {
    set_error(format!("{name} is null"));
    KfStatus::NullArgument
}

/// Parses a scheme file given as a NUL-terminated JSON string.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_spec_from_json(json: *const c_char, out: *mut *mut KfSpec) -> KfStatus {
    guarded(|| {
        if json.is_null() {
            return null_argument("json");
        }
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            set_error("json is not valid UTF-8");
            return KfStatus::InputError;
        };
        match LoadedSpec::from_json(text) {
            Ok(loaded) => {
                *out = Box::into_raw(Box::new(KfSpec { loaded }));
                KfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `spec` must be null or a handle from [`kf_spec_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_spec_free(spec: *mut KfSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of ambient coordinates.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_spec_dim(spec: *const KfSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.loaded.spec.dim())
}

/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_fulton_class(spec: *const KfSpec, out: *mut *mut KfFulton) -> KfStatus {
    guarded(|| {
        let Some(spec) = spec.as_ref() else { return null_argument("spec") };
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        match fulton_class(&spec.loaded.spec, FultonOptions::default()) {
            Ok(class) => {
                *out = Box::into_raw(Box::new(KfFulton { class }));
                KfStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Degree of the class in `t`, or 0 for a null handle.
///
/// # Safety
/// `class` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_fulton_degree(class: *const KfFulton) -> usize {
    class.as_ref().map_or(0, |c| c.class.degree)
}

/// Copies the coefficients, lowest degree first, into `buf`.
///
/// `*len` receives the number of coefficients even when `cap` is too small,
/// in which case nothing is written and `BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `class` must be a live handle, `buf` must hold `cap` values and `len`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_fulton_coeffs(
    class: *const KfFulton,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> KfStatus {
    guarded(|| {
        let Some(class) = class.as_ref() else { return null_argument("class") };
        if len.is_null() {
            return null_argument("len");
        }
        let coeffs = class.class.coeffs.coeffs();
        *len = coeffs.len();
        if coeffs.len() > cap {
            set_error(format!("{} coefficients do not fit in {cap}", coeffs.len()));
            return KfStatus::BufferTooSmall;
        }
        if buf.is_null() && !coeffs.is_empty() {
            return null_argument("buf");
        }
        ptr::copy_nonoverlapping(coeffs.as_ptr(), buf, coeffs.len());
        KfStatus::Ok
    })
}

/// The class as a JSON object. Release the string with [`kf_string_free`].
///
/// # Safety
/// `class` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_fulton_to_json(class: *const KfFulton, out: *mut *mut c_char) -> KfStatus {
    guarded(|| {
        let Some(class) = class.as_ref() else { return null_argument("class") };
        if out.is_null() {
            return null_argument("out");
        }
        let text = serde_json::to_string(&class.class).expect("class serializes");
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        KfStatus::Ok
    })
}

/// # Safety
/// `class` must be null or a handle from [`kf_fulton_class`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_fulton_free(class: *mut KfFulton) {
    if !class.is_null() {
        drop(Box::from_raw(class));
    }
}

/// Virtual Euler characteristic from the sections of the scheme file,
/// checked against the Koszul homology.
///
/// Returns `PROPERTY_VIOLATION` when any check fails; `*out` still holds
/// the homological value.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kf_virtual_chi(spec: *const KfSpec, out: *mut i64) -> KfStatus {
    guarded(|| {
        let Some(spec) = spec.as_ref() else { return null_argument("spec") };
        if out.is_null() {
            return null_argument("out");
        }
        let Some(data) = spec.loaded.obstruction.as_ref() else {
            set_error("the scheme file has no sections");
            return KfStatus::InputError;
        };
        match verify_ksiebert(data, VirtualOptions::default()) {
            Ok(report) => {
                *out = report.chi;
                if report.passed() {
                    KfStatus::Ok
                } else {
                    let failed: Vec<&str> =
                        report.clauses.iter().filter(|c| !c.pass).map(|c| c.name).collect();
                    set_error(format!("failed checks: {}", failed.join(", ")));
                    KfStatus::PropertyViolation
                }
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Message for the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn kf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_exit_classes() {
        assert_eq!(status_of(&Error::InfiniteQuotient), KfStatus::InputError);
        assert_eq!(status_of(&Error::ResourceLimit { budget: 1 }), KfStatus::ResourceLimit);
        assert_eq!(status_of(&Error::Invariant("x".into())), KfStatus::PropertyViolation);
    }

    #[test]
    fn last_error_is_per_call() {
        set_error("boom");
        assert!(!kf_last_error_message().is_null());
        assert_eq!(guarded(|| KfStatus::Ok), KfStatus::Ok);
        assert!(kf_last_error_message().is_null());
    }
}
