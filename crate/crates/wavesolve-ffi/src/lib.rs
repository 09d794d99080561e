//! C ABI for embedding the solver in other languages.
//!
//! All entry points take and return UTF-8 JSON strings matching the CLI's
//! config and report schemas. Strings returned by this library are heap
//! allocated and must be released with `wavesolve_string_free`. Errors are
//! reported through `WsStatus` codes plus a per-thread message retrievable
//! with `wavesolve_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use wavesolve::config::RunConfig;
use wavesolve::{driver, SolverError};

/// Status codes of every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    InvalidArgument = 1,
    ConfigError = 2,
    NumericalError = 3,
    IoError = 4,
    InternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &SolverError) -> WsStatus {
    match err.category() {
        "argument" => WsStatus::InvalidArgument,
        "config" | "serde" => WsStatus::ConfigError,
        "numerical" => WsStatus::NumericalError,
        "io" => WsStatus::IoError,
        _ => WsStatus::InternalError,
    }
}

/// An opaque solver handle wrapping one run configuration.
pub struct WsSolver {
    config: RunConfig,
}

unsafe fn parse_config(config_json: *const c_char) -> Result<RunConfig, WsStatus> {
    if config_json.is_null() {
        set_error("config_json is NULL".into());
        return Err(WsStatus::InvalidArgument);
    }
    let text = match CStr::from_ptr(config_json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("config_json is not valid UTF-8".into());
            return Err(WsStatus::InvalidArgument);
        }
    };
    RunConfig::from_json(text).map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn guarded<F: FnOnce() -> WsStatus>(f: F) -> WsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            WsStatus::InternalError
        }
    }
}

/// Library version as a static string (do not free).
#[no_mangle]
pub extern "C" fn wavesolve_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Latest error message of this thread, or NULL; free with
/// `wavesolve_string_free`.
#[no_mangle]
pub extern "C" fn wavesolve_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Creates a solver handle from a JSON configuration. Returns NULL on
/// error (inspect `wavesolve_last_error`).
///
/// # Safety
/// `config_json` must be a valid NUL-terminated C string or NULL.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_solver_new(config_json: *const c_char) -> *mut WsSolver {
    match parse_config(config_json) {
        Ok(config) => Box::into_raw(Box::new(WsSolver { config })),
        Err(_) => ptr::null_mut(),
    }
}

/// Destroys a handle created by `wavesolve_solver_new`.
///
/// # Safety
/// `solver` must be a pointer previously returned by `wavesolve_solver_new`
/// and not yet freed; NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_solver_free(solver: *mut WsSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Runs the handle's experiment; on success writes the report JSON to
/// `report_out` (caller frees with `wavesolve_string_free`).
///
/// # Safety
/// `solver` must be a live handle and `report_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_solver_run(
    solver: *const WsSolver,
    report_out: *mut *mut c_char,
) -> WsStatus {
    if solver.is_null() || report_out.is_null() {
        set_error("NULL argument".into());
        return WsStatus::InvalidArgument;
    }
    let config = &(*solver).config;
    guarded(|| match driver::run_experiment(config) {
        Ok(report) => match serde_json::to_string_pretty(&report) {
            Ok(text) => {
                *report_out = to_c_string(text);
                WsStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                WsStatus::InternalError
            }
        },
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    })
}

/// One-shot convenience: config JSON in, report JSON out.
///
/// # Safety
/// `config_json` must be a valid NUL-terminated C string; `report_out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_run_json(
    config_json: *const c_char,
    report_out: *mut *mut c_char,
) -> WsStatus {
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let solver = WsSolver { config };
    wavesolve_solver_run(&solver, report_out)
}

/// Runs both acoustic PML variants and returns the comparison report JSON.
///
/// # Safety
/// As for `wavesolve_run_json`.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_compare_json(
    config_json: *const c_char,
    report_out: *mut *mut c_char,
) -> WsStatus {
    if report_out.is_null() {
        set_error("report_out is NULL".into());
        return WsStatus::InvalidArgument;
    }
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(s) => return s,
    };
    guarded(|| match driver::compare_formulations(&config) {
        Ok(report) => {
            *report_out = to_c_string(serde_json::to_string_pretty(&report).unwrap_or_default());
            WsStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    })
}

/// Solves and samples fields on a `grid` x `grid` mesh of cell centers,
/// returning CSV text.
///
/// # Safety
/// As for `wavesolve_run_json`.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_export_csv(
    config_json: *const c_char,
    grid: usize,
    csv_out: *mut *mut c_char,
) -> WsStatus {
    if csv_out.is_null() {
        set_error("csv_out is NULL".into());
        return WsStatus::InvalidArgument;
    }
    let config = match parse_config(config_json) {
        Ok(c) => c,
        Err(s) => return s,
    };
    if grid == 0 {
        set_error("grid must be >= 1".into());
        return WsStatus::InvalidArgument;
    }
    guarded(|| match driver::export_fields(&config, grid) {
        Ok(csv) => {
            *csv_out = to_c_string(csv);
            WsStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must originate from this library and not be freed twice; NULL is a
/// no-op.
#[no_mangle]
pub unsafe extern "C" fn wavesolve_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
