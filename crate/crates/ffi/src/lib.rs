//! C ABI for the cubulate toolkit.
//!
//! Every analysis takes a UTF-8 JSON input string and hands back an opaque
//! `CubulateReport` through an out-parameter, together with a status code.
//! The handle owns the report JSON, the human-readable text, and (on
//! failure) the error message; free it with `cubulate_report_free`. Strings
//! borrowed from a handle stay valid until the handle is freed. All logic
//! lives in the `cubulate` crate; this layer only shuttles pointers.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cubulate::error::Error;
use cubulate::limits::Limits;
use cubulate::report::{self, AnalysisReport, Options};

/// Status of a call across the C boundary.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubulateStatus {
    Ok = 0,
    /// Malformed or inconsistent input (bad JSON, schema or validation
    /// failure, unknown identifier).
    InvalidInput = 1,
    /// A size cap was exceeded; raise `limit` and retry.
    LimitExceeded = 2,
    /// An operation precondition was violated.
    Precondition = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// The input was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The analysis panicked; this is a bug in the toolkit.
    Internal = 6,
}

/// Opaque result handle.
pub struct CubulateReport {
    json: Option<CString>,
    text: Option<CString>,
    error: Option<CString>,
}

impl CubulateReport {
    fn success(report: &AnalysisReport) -> Box<CubulateReport> {
        Box::new(CubulateReport {
            json: CString::new(report.to_json_string()).ok(),
            text: CString::new(report.text.clone()).ok(),
            error: None,
        })
    }

    fn failure(message: &str) -> Box<CubulateReport> {
        Box::new(CubulateReport {
            json: None,
            text: None,
            error: CString::new(message.replace('\0', " ")).ok(),
        })
    }
}

fn status_of(error: &Error) -> CubulateStatus {
    match error {
        Error::Input(_) => CubulateStatus::InvalidInput,
        Error::Limit(_) => CubulateStatus::LimitExceeded,
        Error::Precondition(_) => CubulateStatus::Precondition,
    }
}

/// Shared wrapper: decode the input, run the analysis, box the outcome.
///
/// # Safety
/// `input` must be a valid NUL-terminated C string and `out` a valid
/// pointer; both are dereferenced.
unsafe fn dispatch<F>(
    input: *const c_char,
    out: *mut *mut CubulateReport,
    run: F,
) -> CubulateStatus
where
    F: FnOnce(&str) -> Result<AnalysisReport, Error>,
{
    if out.is_null() {
        return CubulateStatus::NullPointer;
    }
    unsafe { *out = std::ptr::null_mut() };
    if input.is_null() {
        return CubulateStatus::NullPointer;
    }
    let text = match unsafe { CStr::from_ptr(input) }.to_str() {
        Ok(text) => text,
        Err(_) => return CubulateStatus::InvalidUtf8,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run(text)));
    let (status, report) = match outcome {
        Ok(Ok(report)) => (CubulateStatus::Ok, CubulateReport::success(&report)),
        Ok(Err(e)) => (status_of(&e), CubulateReport::failure(&e.to_string())),
        Err(_) => (
            CubulateStatus::Internal,
            CubulateReport::failure("internal panic"),
        ),
    };
    unsafe { *out = Box::into_raw(report) };
    status
}

fn options(witness: bool, limit: usize) -> Options {
    Options {
        witness,
        limits: if limit == 0 {
            Limits::default()
        } else {
            Limits::with_max_elements(limit)
        },
    }
}

/// Toolkit version as a static string.
#[no_mangle]
pub extern "C" fn cubulate_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Classify a tubular group from its JSON spec. `limit` of 0 keeps the
/// default size caps; `witness` embeds re-verified certificates.
///
/// # Safety
/// `input` must be a valid NUL-terminated C string; `out` must be valid for
/// writes. The returned handle must be freed with `cubulate_report_free`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_tubular_analyze(
    input: *const c_char,
    witness: bool,
    limit: usize,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe {
        dispatch(input, out, |text| {
            report::tubular_report(text, &options(witness, limit))
        })
    }
}

/// Classify a free-by-cyclic group from declared train-track JSON.
///
/// # Safety
/// Same contract as `cubulate_tubular_analyze`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_fbc_analyze(
    input: *const c_char,
    witness: bool,
    limit: usize,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe {
        dispatch(input, out, |text| {
            report::fbc_report(text, &options(witness, limit))
        })
    }
}

/// Check the median axioms (and metric compatibility) of an algebra.
///
/// # Safety
/// Same contract as `cubulate_tubular_analyze`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_median_verify(
    input: *const c_char,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe { dispatch(input, out, report::median_verify_report) }
}

/// Compute the rank of a median algebra by both routes.
///
/// # Safety
/// Same contract as `cubulate_tubular_analyze`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_median_rank(
    input: *const c_char,
    witness: bool,
    limit: usize,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe {
        dispatch(input, out, |text| {
            report::median_rank_report(text, &options(witness, limit))
        })
    }
}

/// Validate richly-branching-flat direction data.
///
/// # Safety
/// Same contract as `cubulate_tubular_analyze`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_rbf_validate(
    input: *const c_char,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe { dispatch(input, out, report::rbf_validate_report) }
}

/// Build the discrete branching-flat model and re-check its invariants.
///
/// # Safety
/// Same contract as `cubulate_tubular_analyze`.
#[no_mangle]
pub unsafe extern "C" fn cubulate_rbf_build(
    input: *const c_char,
    radius: i64,
    depth: u32,
    limit: usize,
    out: *mut *mut CubulateReport,
) -> CubulateStatus {
    unsafe {
        dispatch(input, out, |text| {
            report::rbf_build_report(text, radius, depth, &options(false, limit))
        })
    }
}

/// Machine-readable report JSON, or NULL if the call failed. Borrowed from
/// the handle.
///
/// # Safety
/// `report` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn cubulate_report_json(
    report: *const CubulateReport,
) -> *const c_char {
    match unsafe { report.as_ref() }.and_then(|r| r.json.as_ref()) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Human-readable report text, or NULL if the call failed. Borrowed from
/// the handle.
///
/// # Safety
/// `report` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn cubulate_report_text(
    report: *const CubulateReport,
) -> *const c_char {
    match unsafe { report.as_ref() }.and_then(|r| r.text.as_ref()) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Error message for a failed call, or NULL on success. Borrowed from the
/// handle.
///
/// # Safety
/// `report` must be a live handle from this library (or null).
#[no_mangle]
pub unsafe extern "C" fn cubulate_report_error(
    report: *const CubulateReport,
) -> *const c_char {
    match unsafe { report.as_ref() }.and_then(|r| r.error.as_ref()) {
        Some(s) => s.as_ptr(),
        None => std::ptr::null(),
    }
}

/// Free a report handle. Null is accepted and ignored.
///
/// # Safety
/// `report` must be a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cubulate_report_free(report: *mut CubulateReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}
