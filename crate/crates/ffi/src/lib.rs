//! C interface to the slope-arithmetic library. Harder-Narasimhan types
//! cross the boundary as opaque handles, everything else as JSON strings.
//! Every fallible entry point returns a status code; the most recent error
//! message is kept per thread and retrieved with [`hnlab_last_error`].
//!
//! Strings returned by this library are owned by the caller and must be
//! released with [`hnlab_string_free`]; handles with [`hnlab_hn_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hnlab::hn::{H0Dim, HNType, Slope};
use hnlab::rz::{tangent_profiles, RZDatum};

/// Status of a call. Zero is success; anything else leaves a message
/// retrievable with `hnlab_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnlabStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
}

/// Opaque handle to a Harder-Narasimhan type.
pub struct HnlabHn {
    inner: HNType,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn to_owned_c(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string or null.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, HnlabStatus> {
    if s.is_null() {
        set_error("null string argument".into());
        return Err(HnlabStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        HnlabStatus::InvalidUtf8
    })
}

/// Version of the underlying library as a static string; do not free.
#[no_mangle]
pub extern "C" fn hnlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Most recent error message on this thread, or null; free the result with
/// `hnlab_string_free`.
#[no_mangle]
pub extern "C" fn hnlab_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| to_owned_c(c.to_string_lossy().into_owned()))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hnlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"summands": [{"num": .., "den": .., "mult": ..}, ..]}` into a
/// handle stored in `out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_from_json(
    json: *const c_char,
    out: *mut *mut HnlabHn,
) -> HnlabStatus {
    clear_error();
    if out.is_null() {
        set_error("null output pointer".into());
        return HnlabStatus::NullArgument;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            set_error(format!("malformed JSON: {e}"));
            return HnlabStatus::InvalidInput;
        }
    };
    match HNType::from_json(&value) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(HnlabHn { inner }));
            HnlabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HnlabStatus::InvalidInput
        }
    }
}

/// Serializes a handle back to its JSON form; free with `hnlab_string_free`.
///
/// # Safety
/// `h` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_to_json(h: *const HnlabHn) -> *mut c_char {
    if h.is_null() {
        set_error("null handle".into());
        return ptr::null_mut();
    }
    to_owned_c((*h).inner.to_json().to_string())
}

/// Releases a handle.
///
/// # Safety
/// `h` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_free(h: *mut HnlabHn) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_dual(h: *const HnlabHn) -> *mut HnlabHn {
    if h.is_null() {
        set_error("null handle".into());
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(HnlabHn { inner: (*h).inner.dual() }))
}

/// # Safety
/// `a` and `b` must be live handles.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_tensor(
    a: *const HnlabHn,
    b: *const HnlabHn,
) -> *mut HnlabHn {
    if a.is_null() || b.is_null() {
        set_error("null handle".into());
        return ptr::null_mut();
    }
    Box::into_raw(Box::new(HnlabHn { inner: (*a).inner.tensor(&(*b).inner) }))
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_rank(h: *const HnlabHn) -> u64 {
    if h.is_null() {
        return 0;
    }
    (*h).inner.rank()
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_degree(h: *const HnlabHn) -> i64 {
    if h.is_null() {
        return 0;
    }
    (*h).inner.degree()
}

/// Writes the section-space dimension to `out` and returns true, or
/// returns false when it is infinite (some slope is positive).
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hnlab_hn_h0_finite(h: *const HnlabHn, out: *mut u64) -> bool {
    if h.is_null() || out.is_null() {
        return false;
    }
    match (*h).inner.h0_dim() {
        H0Dim::Finite(n) => {
            *out = n;
            true
        }
        H0Dim::Infinite => false,
    }
}

/// Enumerates tangent slope profiles for a basic Rapoport-Zink datum and
/// stores `{"enumerated": [..], "admissible": [..]}` in `out_json`;
/// `slope_max` is a fraction like "1/3" or null for the default bound.
///
/// # Safety
/// `slope_max` must be null or a valid NUL-terminated string; `out_json`
/// must be writable. Free the result with `hnlab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn hnlab_rz_enumerate(
    height: u64,
    dim: u64,
    slope_max: *const c_char,
    out_json: *mut *mut c_char,
) -> HnlabStatus {
    clear_error();
    if out_json.is_null() {
        set_error("null output pointer".into());
        return HnlabStatus::NullArgument;
    }
    let bound = if slope_max.is_null() {
        None
    } else {
        let text = match read_str(slope_max) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match Slope::parse(text) {
            Ok(s) => Some(s),
            Err(e) => {
                set_error(e.to_string());
                return HnlabStatus::InvalidInput;
            }
        }
    };
    let result = RZDatum::new(height, dim).and_then(|datum| tangent_profiles(&datum, bound));
    match result {
        Ok((enumerated, admissible)) => {
            let payload = serde_json::json!({
                "enumerated": enumerated.iter().map(HNType::to_json).collect::<Vec<_>>(),
                "admissible": admissible.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            });
            *out_json = to_owned_c(payload.to_string());
            HnlabStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            HnlabStatus::InvalidInput
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(p: *mut c_char) -> String {
        assert!(!p.is_null());
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        hnlab_string_free(p);
        s
    }

    #[test]
    fn round_trip_and_polygon_ops() {
        unsafe {
            let json = c(r#"{"summands": [{"num": 1, "den": 2, "mult": 1}]}"#);
            let mut h: *mut HnlabHn = ptr::null_mut();
            assert_eq!(hnlab_hn_from_json(json.as_ptr(), &mut h), HnlabStatus::Ok);
            assert_eq!(hnlab_hn_rank(h), 2);
            assert_eq!(hnlab_hn_degree(h), 1);

            let square = hnlab_hn_tensor(h, h);
            assert_eq!(hnlab_hn_rank(square), 4);
            assert_eq!(hnlab_hn_degree(square), 4);

            let dual = hnlab_hn_dual(h);
            assert_eq!(hnlab_hn_degree(dual), -1);
            let mut dim = u64::MAX;
            assert!(hnlab_hn_h0_finite(dual, &mut dim));
            assert_eq!(dim, 0);
            assert!(!hnlab_hn_h0_finite(h, &mut dim));

            let text = take_string(hnlab_hn_to_json(dual));
            let mut back: *mut HnlabHn = ptr::null_mut();
            let text = c(&text);
            assert_eq!(hnlab_hn_from_json(text.as_ptr(), &mut back), HnlabStatus::Ok);
            assert_eq!(hnlab_hn_degree(back), -1);

            for p in [h, square, dual, back] {
                hnlab_hn_free(p);
            }
        }
    }

    #[test]
    fn error_reporting() {
        unsafe {
            let mut h: *mut HnlabHn = ptr::null_mut();
            let bad = c("{not json");
            assert_eq!(
                hnlab_hn_from_json(bad.as_ptr(), &mut h),
                HnlabStatus::InvalidInput
            );
            let msg = take_string(hnlab_last_error());
            assert!(msg.contains("malformed JSON"), "{msg}");

            assert_eq!(
                hnlab_hn_from_json(ptr::null(), &mut h),
                HnlabStatus::NullArgument
            );
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                hnlab_rz_enumerate(2, 2, ptr::null(), &mut out),
                HnlabStatus::InvalidInput
            );
            let msg = take_string(hnlab_last_error());
            assert!(msg.contains("height"), "{msg}");
        }
    }

    #[test]
    fn enumeration_payload() {
        unsafe {
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                hnlab_rz_enumerate(2, 1, ptr::null(), &mut out),
                HnlabStatus::Ok
            );
            let payload: serde_json::Value =
                serde_json::from_str(&take_string(out)).unwrap();
            assert_eq!(payload["enumerated"].as_array().unwrap().len(), 2);
            assert_eq!(payload["admissible"].as_array().unwrap().len(), 2);

            let bound = c("1/3");
            let mut narrow: *mut c_char = ptr::null_mut();
            assert_eq!(
                hnlab_rz_enumerate(2, 1, bound.as_ptr(), &mut narrow),
                HnlabStatus::Ok
            );
            let payload: serde_json::Value =
                serde_json::from_str(&take_string(narrow)).unwrap();
            assert_eq!(payload["enumerated"].as_array().unwrap().len(), 1);
        }
    }

    #[test]
    fn version_is_exposed() {
        unsafe {
            let v = CStr::from_ptr(hnlab_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
