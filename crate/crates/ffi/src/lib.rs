//! C interface. Every function returns an [`OrdfillStatus`]; on failure the
//! message is available from [`ordfill_last_error`] on the same thread.
//! Strings returned through `out` pointers are owned by the caller and must
//! be released with [`ordfill_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ordfill_core::bundle::verify_bundle;
use ordfill_core::filling::Slope;
use ordfill_core::manifold::Manifold;
use ordfill_core::pipeline::{framing_section, homology_section, run_pipeline, Config, PipelineError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdfillStatus {
    Ok = 0,
    VerificationFailed = 1,
    Inconclusive = 2,
    InvalidArgument = 3,
    ParseError = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdfillVerdict {
    NotOrderable = 0,
    Unknown = 1,
}

/// Opaque manifold handle.
pub struct OrdfillManifold {
    inner: Manifold,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OrdfillStatus, String);

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = if e.inconclusive {
            OrdfillStatus::Inconclusive
        } else {
            OrdfillStatus::VerificationFailed
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(OrdfillStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OrdfillStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrdfillStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OrdfillStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    let c = CString::new(s).map_err(|_| invalid("output contains a nul byte"))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `m` is null or a handle from this library that has not been freed.
unsafe fn handle<'a>(m: *const OrdfillManifold) -> Result<&'a Manifold, Failure> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| invalid("manifold handle is null"))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write_handle(out: *mut *mut OrdfillManifold, inner: Manifold) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(OrdfillManifold { inner }));
    Ok(())
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ordfill_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ordfill_manifold_bundled(out: *mut *mut OrdfillManifold) -> OrdfillStatus {
    guard(|| write_handle(out, Manifold::bundled()))
}

/// Parses manifold data text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ordfill_manifold_parse(text: *const c_char, out: *mut *mut OrdfillManifold) -> OrdfillStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let m = Manifold::parse(text).map_err(|e| Failure(OrdfillStatus::ParseError, e.to_string()))?;
        write_handle(out, m)
    })
}

/// # Safety
/// `m` is null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ordfill_manifold_free(m: *mut OrdfillManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Homology and framing sections as JSON.
///
/// # Safety
/// `m` must be a live handle and `out_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ordfill_homology(m: *const OrdfillManifold, out_json: *mut *mut c_char) -> OrdfillStatus {
    guard(|| {
        let m = handle(m)?;
        let (h, _) = homology_section(m)?;
        let f = framing_section(m)?;
        let v = serde_json::json!({ "homology": h, "framing": f });
        write_string(out_json, serde_json::to_string_pretty(&v).expect("serializes"))
    })
}

/// Runs the full pipeline at default budgets and writes the bundle JSON.
///
/// # Safety
/// `m` must be a live handle, `slopes` must point to `n_slopes` valid
/// NUL-terminated strings (or be null when `n_slopes` is 0) and `out_json`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ordfill_pipeline(
    m: *const OrdfillManifold,
    slopes: *const *const c_char,
    n_slopes: usize,
    out_json: *mut *mut c_char,
) -> OrdfillStatus {
    guard(|| {
        let m = handle(m)?;
        if slopes.is_null() && n_slopes > 0 {
            return Err(invalid("slope array is null"));
        }
        let mut config = Config::default();
        for i in 0..n_slopes {
            let s = read_str(*slopes.add(i), "slope")?;
            config.slopes.push(s.parse::<Slope>().map_err(|e| invalid(&e.to_string()))?);
        }
        write_string(out_json, run_pipeline(m, &config)?.to_json())
    })
}

/// Checks a bundle without searching. `Ok` means every certificate replayed.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ordfill_verify_bundle(json: *const c_char) -> OrdfillStatus {
    guard(|| {
        let text = read_str(json, "bundle")?;
        verify_bundle(text).map(|_| ()).map_err(|e| Failure(OrdfillStatus::VerificationFailed, e))
    })
}

/// Verdict for the slope `p/q`, after certifying every prerequisite.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ordfill_slope_verdict(
    m: *const OrdfillManifold,
    p: i64,
    q: i64,
    out: *mut OrdfillVerdict,
) -> OrdfillStatus {
    guard(|| {
        let m = handle(m)?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let r = Slope::new(p, q).map_err(|e| invalid(&e.to_string()))?;
        let config = Config {
            slopes: vec![r],
            ..Config::default()
        };
        let b = run_pipeline(m, &config)?;
        let label = b.verdicts.as_ref().and_then(|v| v.first()).map(|v| v.verdict.as_str());
        *out = match label {
            Some("NOT_ORDERABLE") => OrdfillVerdict::NotOrderable,
            _ => OrdfillVerdict::Unknown,
        };
        Ok(())
    })
}

/// # Safety
/// `s` is null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ordfill_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
