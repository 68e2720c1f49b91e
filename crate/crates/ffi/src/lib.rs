//! C interface to `cremona-core`.
//!
//! Maps live behind the opaque `CrMap` handle. Every fallible call returns a
//! [`CrStatus`]; strings handed out by the library are released with
//! [`cr_string_free`] and maps with [`cr_map_free`]. The message of the most
//! recent failure on the calling thread is available from [`cr_last_error`].

use cremona_core::cli::{self, Command, RunConfig};
use cremona_core::cremona::{degree_sequence_with, DegreeOptions, PlaneBirationalMap};
use cremona_core::halphen::{isometry_degree, NSIsometry, RANK};
use cremona_core::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Invalid = 3,
    NotFound = 4,
    Budget = 5,
    Verification = 6,
    Panic = 7,
}

/// Opaque handle to a plane birational map.
pub struct CrMap {
    map: PlaneBirationalMap,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> CrStatus {
    match err {
        Error::Schema(_) => CrStatus::Parse,
        Error::BudgetExceeded { .. } => CrStatus::Budget,
        Error::Verification(_) => CrStatus::Verification,
        Error::SamplingExhausted { .. } | Error::Genericity(_) => CrStatus::NotFound,
        _ => CrStatus::Invalid,
    }
}

fn fail(err: Error) -> CrStatus {
    set_error(&err.to_string());
    status_of(&err)
}

/// Run `body`, converting panics into [`CrStatus::Panic`].
fn guard(body: impl FnOnce() -> CrStatus) -> CrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            CrStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, CrStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(CrStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        CrStatus::Parse
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CrStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CrStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            CrStatus::Invalid
        }
    }
}

fn boxed(map: PlaneBirationalMap) -> *mut CrMap {
    Box::into_raw(Box::new(CrMap { map }))
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return CrStatus::NullPointer;
        }
    };
}

/// Message of the last failure on this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn cr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a map from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_map_from_json(json: *const c_char, out: *mut *mut CrMap) -> CrStatus {
    guard(|| {
        nonnull!(out);
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(Error::Schema(e.to_string())),
        };
        match PlaneBirationalMap::from_json(&value) {
            Ok(map) => {
                *out = boxed(map);
                CrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// JSON form of a map; release the string with [`cr_string_free`].
///
/// # Safety
/// `map` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_map_to_json(map: *const CrMap, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        nonnull!(map, out);
        write_string(out, (*map).map.to_json().to_string())
    })
}

/// Degree of a map.
///
/// # Safety
/// `map` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_map_degree(map: *const CrMap, out: *mut u32) -> CrStatus {
    guard(|| {
        nonnull!(map, out);
        *out = (*map).map.degree();
        CrStatus::Ok
    })
}

/// `f ∘ g`.
///
/// # Safety
/// `f` and `g` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_map_compose(f: *const CrMap, g: *const CrMap, out: *mut *mut CrMap) -> CrStatus {
    guard(|| {
        nonnull!(f, g, out);
        match (*f).map.compose(&(*g).map) {
            Ok(h) => {
                *out = boxed(h);
                CrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Inverse of a map, which has the same degree; `NotFound` if `f` is not birational.
///
/// # Safety
/// `f` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_map_invert(f: *const CrMap, out: *mut *mut CrMap) -> CrStatus {
    guard(|| {
        nonnull!(f, out);
        let map = &(*f).map;
        match map.invert(map.degree()) {
            Some(inv) => {
                *out = boxed(inv);
                CrStatus::Ok
            }
            None => {
                set_error("no inverse of the same degree");
                CrStatus::NotFound
            }
        }
    })
}

/// Writes `deg(f^n)` for `n = 0..=n_max` into `out`, which holds `len >= n_max + 1` entries.
///
/// # Safety
/// `f` must come from this library and `out` must point to `len` writable integers.
#[no_mangle]
pub unsafe extern "C" fn cr_map_degree_sequence(f: *const CrMap, n_max: usize, out: *mut u64, len: usize) -> CrStatus {
    guard(|| {
        nonnull!(f, out);
        if len < n_max + 1 {
            set_error("output buffer too short");
            return CrStatus::Invalid;
        }
        match degree_sequence_with(&(*f).map, n_max, &DegreeOptions::default()) {
            Ok(report) => {
                ptr::copy_nonoverlapping(report.degrees.as_ptr(), out, report.degrees.len());
                CrStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a map. Null is ignored.
///
/// # Safety
/// `map` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cr_map_free(map: *mut CrMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Release a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Run the `oscillate` command on a JSON input such as `{"support": {"2": 1}, "seed": 17}`.
///
/// The full report is written to `out`; `Verification` is returned when the
/// synthesized map fails its checks.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cr_oscillate_json(input: *const c_char, out: *mut *mut c_char) -> CrStatus {
    guard(|| {
        nonnull!(out);
        let text = match read_str(input) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let value = match cli::parse_input(text) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let outcome = cli::run(Command::Oscillate, &RunConfig::default(), &value);
        let written = write_string(out, cli::render(&outcome.report));
        if written != CrStatus::Ok {
            return written;
        }
        match outcome.status {
            cli::EXIT_OK => CrStatus::Ok,
            cli::EXIT_VERIFICATION => CrStatus::Verification,
            cli::EXIT_SAMPLING => CrStatus::NotFound,
            cli::EXIT_BUDGET => CrStatus::Budget,
            _ => CrStatus::Parse,
        }
    })
}

/// Run any command line, e.g. `"--horizon 4 degrees"`, on a JSON input.
///
/// The report goes to `out` and the process-style exit status to `exit_status`.
///
/// # Safety
/// `args` and `input` must be NUL-terminated strings; `out` and `exit_status` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cr_run_json(
    args: *const c_char,
    input: *const c_char,
    out: *mut *mut c_char,
    exit_status: *mut i32,
) -> CrStatus {
    guard(|| {
        nonnull!(out, exit_status);
        let (args, text) = match (read_str(args), read_str(input)) {
            (Ok(a), Ok(t)) => (a, t),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let cli = match cli::parse_command_line(std::iter::once("cremona").chain(args.split_whitespace())) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let config = match cli.config() {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let value = match cli::parse_input(text) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let outcome = cli::run(cli.command, &config, &value);
        *exit_status = outcome.status;
        write_string(out, cli::render(&outcome.report))
    })
}

/// Degree `e0 . M(e0)` of a lattice isometry given as 100 row-major integers.
///
/// # Safety
/// `matrix` must point to 100 readable integers and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cr_lattice_isometry_degree(matrix: *const i64, out: *mut i64) -> CrStatus {
    guard(|| {
        nonnull!(matrix, out);
        let entries = std::slice::from_raw_parts(matrix, RANK * RANK);
        let m = NSIsometry { matrix: std::array::from_fn(|i| std::array::from_fn(|j| entries[i * RANK + j])) };
        if !m.preserves_form() {
            set_error("matrix does not preserve the intersection form");
            return CrStatus::Invalid;
        }
        *out = isometry_degree(&m);
        CrStatus::Ok
    })
}
