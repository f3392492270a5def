//! C interface to the scene checker.
//!
//! Scenes and reports are opaque handles owned by the caller and released
//! with their `_free` functions. Every fallible call returns a [`DmanStatus`];
//! the message of the most recent failure on the calling thread is available
//! from [`dman_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dman_core::report::{CheckReport, Format, Status};
use dman_core::scene::{parse_scene, run_checks, SceneError, SceneFile};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DmanStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    SyntaxError = 3,
    DuplicateName = 4,
    UnknownReference = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Overall verdict of a report.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DmanVerdict {
    Pass = 0,
    Fail = 1,
    Unattested = 2,
}

/// Report rendering.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DmanFormat {
    Text = 0,
    Json = 1,
}

/// A parsed scene.
pub struct DmanScene {
    scene: SceneFile,
}

/// The report of a scene run.
pub struct DmanReport {
    report: CheckReport,
}

struct LastError {
    message: CString,
    line: usize,
    col: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>, line: usize, col: usize) {
    let message = CString::new(message.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { message, line, col }));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guarded(f: impl FnOnce() -> DmanStatus) -> DmanStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic", 0, 0);
            DmanStatus::Panic
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, DmanStatus> {
    if p.is_null() {
        set_error("null argument", 0, 0);
        return Err(DmanStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("input is not valid UTF-8", 0, 0);
        DmanStatus::InvalidUtf8
    })
}

/// Parses and validates scene text.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dman_scene_parse(text: *const c_char, out: *mut *mut DmanScene) -> DmanStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null argument", 0, 0);
            return DmanStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match text_arg(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_scene(text) {
            Ok(scene) => {
                *out = Box::into_raw(Box::new(DmanScene { scene }));
                DmanStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string(), e.line(), e.col());
                match e {
                    SceneError::Syntax { .. } => DmanStatus::SyntaxError,
                    SceneError::DuplicateName { .. } => DmanStatus::DuplicateName,
                    SceneError::UnknownReference { .. } => DmanStatus::UnknownReference,
                }
            }
        }
    })
}

/// Number of declarations in the scene, checks included.
///
/// # Safety
/// `scene` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dman_scene_len(scene: *const DmanScene) -> usize {
    scene.as_ref().map_or(0, |s| s.scene.decls.len())
}

/// Releases a scene. Null is ignored.
///
/// # Safety
/// `scene` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dman_scene_free(scene: *mut DmanScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Runs every check of the scene.
///
/// # Safety
/// `scene` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dman_scene_run(scene: *const DmanScene, out: *mut *mut DmanReport) -> DmanStatus {
    guarded(|| {
        if out.is_null() || scene.is_null() {
            set_error("null argument", 0, 0);
            return DmanStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let report = run_checks(&(*scene).scene);
        *out = Box::into_raw(Box::new(DmanReport { report }));
        DmanStatus::Ok
    })
}

/// Keeps the entries whose id starts with `prefix`, in a new report.
///
/// # Safety
/// `report` must be a live handle, `prefix` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dman_report_filter(
    report: *const DmanReport,
    prefix: *const c_char,
    out: *mut *mut DmanReport,
) -> DmanStatus {
    guarded(|| {
        if out.is_null() || report.is_null() {
            set_error("null argument", 0, 0);
            return DmanStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let prefix = match text_arg(prefix) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let report = (*report).report.filtered(prefix);
        *out = Box::into_raw(Box::new(DmanReport { report }));
        DmanStatus::Ok
    })
}

/// Verdict of the whole report.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dman_report_verdict(report: *const DmanReport) -> DmanVerdict {
    match report.as_ref().map(|r| r.report.status) {
        Some(Status::Fail) | None => DmanVerdict::Fail,
        Some(Status::Unattested) => DmanVerdict::Unattested,
        Some(_) => DmanVerdict::Pass,
    }
}

/// Process exit code the command-line tool would use for this report.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dman_report_exit_code(report: *const DmanReport) -> i32 {
    report.as_ref().map_or(1, |r| r.report.exit_code())
}

/// Status of the entry with the given id as a lowercase name, or null when
/// there is no such entry. The string is static.
///
/// # Safety
/// `report` must be a live handle and `id` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dman_report_entry_status(report: *const DmanReport, id: *const c_char) -> *const c_char {
    let (Some(r), Ok(id)) = (report.as_ref(), text_arg(id)) else {
        return ptr::null();
    };
    match r.report.find(id).map(|e| e.status) {
        Some(Status::Pass) => c"pass".as_ptr(),
        Some(Status::Fail) => c"fail".as_ptr(),
        Some(Status::Attested) => c"attested".as_ptr(),
        Some(Status::Unattested) => c"unattested".as_ptr(),
        Some(Status::Skipped) => c"skipped".as_ptr(),
        None => ptr::null(),
    }
}

/// Renders the report. The string is released with [`dman_string_free`].
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dman_report_render(
    report: *const DmanReport,
    format: DmanFormat,
    color: bool,
    out: *mut *mut c_char,
) -> DmanStatus {
    guarded(|| {
        if out.is_null() || report.is_null() {
            set_error("null argument", 0, 0);
            return DmanStatus::NullArgument;
        }
        let format = match format {
            DmanFormat::Text => Format::Text,
            DmanFormat::Json => Format::Json,
        };
        let text = (*report).report.emit(format, color);
        match CString::new(text) {
            Ok(s) => {
                *out = s.into_raw();
                DmanStatus::Ok
            }
            Err(_) => {
                *out = ptr::null_mut();
                set_error("report contains a nul byte", 0, 0);
                DmanStatus::InvalidArgument
            }
        }
    })
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dman_report_free(report: *mut DmanReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from [`dman_report_render`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dman_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next
/// call into the library on the same thread.
#[no_mangle]
pub extern "C" fn dman_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Line of the last parse failure, or 0.
#[no_mangle]
pub extern "C" fn dman_last_error_line() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |e| e.line))
}

/// Column of the last parse failure, or 0.
#[no_mangle]
pub extern "C" fn dman_last_error_col() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |e| e.col))
}

/// Library version.
#[no_mangle]
pub extern "C" fn dman_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_message_survives_until_next_call() {
        let mut scene = ptr::null_mut();
        let s = unsafe { dman_scene_parse(c"(patch M :coords (x".as_ptr(), &mut scene) };
        assert_eq!(s, DmanStatus::SyntaxError);
        assert!(scene.is_null());
        let msg = unsafe { CStr::from_ptr(dman_last_error_message()) }.to_str().unwrap();
        assert!(msg.contains("syntax error"), "{msg}");
        assert_eq!(dman_last_error_line(), 1);
        let s = unsafe { dman_scene_parse(c"".as_ptr(), &mut scene) };
        assert_eq!(s, DmanStatus::Ok);
        assert!(dman_last_error_message().is_null());
        unsafe { dman_scene_free(scene) };
    }
}
