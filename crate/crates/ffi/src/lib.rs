//! C ABI over finite systems. Handles are opaque; every fallible call
//! returns an [`FfStatus`] and stores a message readable through
//! [`ff_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fixfactor::decomposition::{dim_fix, is_topologically_ergodic};
use fixfactor::io::{decompose_report, parse_system};
use fixfactor::{Error, FiniteSystem};

/// Opaque system handle.
pub struct FfSystem(FiniteSystem);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfStatus {
    Ok = 0,
    NullArgument = 1,
    Utf8 = 2,
    Format = 3,
    Name = 4,
    Continuity = 5,
    Size = 6,
    Other = 99,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FfStatus, msg: String) -> FfStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FfStatus {
    let status = match e.code() {
        "E_FORMAT" => FfStatus::Format,
        "E_NAME" => FfStatus::Name,
        "E_CONTINUITY" => FfStatus::Continuity,
        "E_SIZE" => FfStatus::Size,
        _ => FfStatus::Other,
    };
    fail(status, format!("{}: {e}", e.code()))
}

fn null(what: &str) -> FfStatus {
    fail(FfStatus::NullArgument, format!("null argument `{what}`"))
}

/// Parses a system from NUL-terminated JSON. On success `*out` owns a handle
/// to release with [`ff_system_free`].
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_system_from_json(json: *const c_char, out: *mut *mut FfSystem) -> FfStatus {
    if json.is_null() {
        return null("json");
    }
    if out.is_null() {
        return null("out");
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        return fail(FfStatus::Utf8, "input is not UTF-8".into());
    };
    match parse_system(text) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(FfSystem(sys)));
            FfStatus::Ok
        }
        Err(e) => {
            *out = ptr::null_mut();
            from_error(e)
        }
    }
}

/// # Safety
/// `sys` must come from [`ff_system_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ff_system_free(sys: *mut FfSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of points, 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ff_system_len(sys: *const FfSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.0.len())
}

/// Dimension of the fixed space: the number of maximal level sets.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_system_dim_fix(sys: *const FfSystem, out: *mut usize) -> FfStatus {
    let Some(s) = sys.as_ref() else { return null("sys") };
    if out.is_null() {
        return null("out");
    }
    *out = dim_fix(&s.0);
    FfStatus::Ok
}

/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_system_is_ergodic(sys: *const FfSystem, out: *mut bool) -> FfStatus {
    let Some(s) = sys.as_ref() else { return null("sys") };
    if out.is_null() {
        return null("out");
    }
    *out = is_topologically_ergodic(&s.0);
    FfStatus::Ok
}

/// Decomposition report as JSON; release `*out` with [`ff_string_free`].
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ff_system_decompose_json(sys: *const FfSystem, out: *mut *mut c_char) -> FfStatus {
    let Some(s) = sys.as_ref() else { return null("sys") };
    if out.is_null() {
        return null("out");
    }
    let text = serde_json::to_string(&decompose_report(&s.0)).expect("serializable");
    *out = CString::new(text).expect("json has no nul").into_raw();
    FfStatus::Ok
}

/// # Safety
/// `s` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn ff_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ff_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
