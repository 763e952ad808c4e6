//! C ABI over the `pqra` checker and interpreter.
//!
//! A program is checked once under a named metric profile, producing an
//! opaque [`PqraChecked`] handle. The handle can be queried for the
//! inferred type and for bound-versus-measurement comparisons at concrete
//! parameter values. Every fallible call returns a [`PqraStatus`]; the
//! message of the most recent failure on the calling thread is available
//! from [`pqra_last_error`].
//!
//! Strings returned through out-parameters are owned by the caller and
//! must be released with [`pqra_string_free`]; handles are released with
//! [`pqra_checked_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pqra::harness::{check_source, corpus_program, verify_bounds, HarnessError};
use pqra::index::{CheckStrategy, Valuation};
use pqra::metrics::{profile_by_name, MetricProfile};
use pqra::syntax::ast::Program;
use pqra::syntax::pretty::{display_index, display_type};
use pqra::typeck::ProgramTyping;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PqraStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// No metric profile or bundled program has the given name.
    UnknownName = 3,
    ParseError = 4,
    TypeError = 5,
    /// Running the program failed (missing parameter, stuck term, ...).
    EvalError = 6,
    /// The program ran, but the measured cost exceeded the inferred bound.
    BoundViolated = 7,
    /// An internal error; the library state is unaffected.
    Internal = 8,
}

/// A program that has passed the checker under one profile.
pub struct PqraChecked {
    program: Program,
    typing: ProgramTyping,
    profile: &'static MetricProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: PqraStatus, msg: impl Into<String>) -> PqraStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting a panic into [`PqraStatus::Internal`].
fn guard(f: impl FnOnce() -> PqraStatus) -> PqraStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(PqraStatus::Internal, "internal error"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, PqraStatus> {
    if p.is_null() {
        return Err(fail(PqraStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(PqraStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> PqraStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PqraStatus::Ok
        }
        Err(e) => fail(PqraStatus::Internal, e.to_string()),
    }
}

fn harness_status(e: &HarnessError) -> PqraStatus {
    match e {
        HarnessError::Parse(_) => PqraStatus::ParseError,
        HarnessError::Type(_) => PqraStatus::TypeError,
        _ => PqraStatus::EvalError,
    }
}

/// Message describing the last failure on this thread (empty if none).
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn pqra_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and checks `source` under the profile named `profile`
/// (`width`, `gatecount`, `gatecount_all`, `tcount`, `qubits`, `bits`
/// or `depth`). On success `*out` receives a new handle.
///
/// # Safety
/// `source` and `profile` must be null or NUL-terminated strings; `out`
/// must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pqra_check(
    source: *const c_char,
    profile: *const c_char,
    out: *mut *mut PqraChecked,
) -> PqraStatus {
    guard(|| {
        if out.is_null() {
            return fail(PqraStatus::NullArgument, "null output handle");
        }
        *out = ptr::null_mut();
        let (source, name) = match (read_str(source), read_str(profile)) {
            (Ok(s), Ok(n)) => (s, n),
            (Err(e), _) | (_, Err(e)) => return e,
        };
        let Some(profile) = profile_by_name(name) else {
            return fail(PqraStatus::UnknownName, format!("unknown profile `{name}`"));
        };
        match check_source(source, profile, CheckStrategy::default()) {
            Ok((program, typing)) => {
                *out = Box::into_raw(Box::new(PqraChecked { program, typing, profile }));
                PqraStatus::Ok
            }
            Err(e) => fail(harness_status(&e), e.to_string()),
        }
    })
}

/// Copies the source of a bundled example program into `*out`.
///
/// # Safety
/// `name` must be null or a NUL-terminated string; `out` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pqra_corpus_source(name: *const c_char, out: *mut *mut c_char) -> PqraStatus {
    guard(|| {
        if out.is_null() {
            return fail(PqraStatus::NullArgument, "null output string");
        }
        let name = match read_str(name) {
            Ok(n) => n,
            Err(e) => return e,
        };
        match corpus_program(name) {
            Some(p) => write_string(out, p.source.to_string()),
            None => fail(PqraStatus::UnknownName, format!("no bundled program `{name}`")),
        }
    })
}

/// Writes the inferred type of `main` into `*out`.
///
/// # Safety
/// `checked` must be null or a live handle; `out` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn pqra_checked_type(checked: *const PqraChecked, out: *mut *mut c_char) -> PqraStatus {
    guard(|| match (checked.as_ref(), out.is_null()) {
        (Some(c), false) => write_string(out, display_type(&c.typing.main_type, c.profile)),
        _ => fail(PqraStatus::NullArgument, "null handle or output"),
    })
}

/// Writes the effect of evaluating `main` itself into `*out`.
///
/// # Safety
/// As for [`pqra_checked_type`].
#[no_mangle]
pub unsafe extern "C" fn pqra_checked_effect(checked: *const PqraChecked, out: *mut *mut c_char) -> PqraStatus {
    guard(|| match (checked.as_ref(), out.is_null()) {
        (Some(c), false) => write_string(out, display_index(&c.typing.main_effect, c.profile)),
        _ => fail(PqraStatus::NullArgument, "null handle or output"),
    })
}

/// Runs `main` with the index parameters `names[k] = values[k]` and
/// compares the inferred bound with the measured cost. Under the depth
/// profile both numbers are the worst case over the output wires.
/// Returns [`PqraStatus::BoundViolated`] (with both numbers written) when
/// the measurement exceeds the bound.
///
/// # Safety
/// `names` and `values` must each point to `len` elements (or be null
/// when `len` is zero); `bound` and `measured` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn pqra_checked_verify(
    checked: *const PqraChecked,
    names: *const *const c_char,
    values: *const u64,
    len: usize,
    bound: *mut u64,
    measured: *mut u64,
) -> PqraStatus {
    guard(|| {
        let Some(c) = checked.as_ref() else {
            return fail(PqraStatus::NullArgument, "null handle");
        };
        if len > 0 && (names.is_null() || values.is_null()) {
            return fail(PqraStatus::NullArgument, "null parameter arrays");
        }
        let mut val = Valuation::new();
        for k in 0..len {
            match read_str(*names.add(k)) {
                Ok(n) => val.insert(n.to_string(), *values.add(k)),
                Err(e) => return e,
            };
        }
        let report = match verify_bounds("main", &c.program, &c.typing, c.profile, &[val]) {
            Ok(r) => r,
            Err(e) => return fail(harness_status(&e), e.to_string()),
        };
        let row = &report.rows[0];
        if let Some(b) = bound.as_mut() {
            *b = row.bound;
        }
        if let Some(m) = measured.as_mut() {
            *m = row.measured;
        }
        if row.holds {
            PqraStatus::Ok
        } else {
            fail(PqraStatus::BoundViolated, report.to_string())
        }
    })
}

/// Releases a handle returned by [`pqra_check`]. Null is ignored.
///
/// # Safety
/// `checked` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pqra_checked_free(checked: *mut PqraChecked) {
    if !checked.is_null() {
        drop(Box::from_raw(checked));
    }
}

/// Releases a string returned through an out-parameter. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pqra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
