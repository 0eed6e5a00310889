//! C ABI for the entaudit library.
//!
//! The surface follows the usual opaque-handle conventions:
//!
//! * states and measures live behind [`ea_state`] / [`ea_measure`]
//!   pointers created and released by this library;
//! * every fallible call returns an [`ea_status`] code and leaves a
//!   human-readable explanation retrievable via [`ea_last_error`];
//! * strings returned through `char**` out-parameters are owned by the
//!   caller and must be released with [`ea_string_free`].
//!
//! JSON is the interchange format for states and reports, matching the
//! command-line artifacts byte for byte. The generated header lands in
//! `include/entaudit.h` at build time.
//!
//! All entry points catch panics at the boundary; a panic surfaces as
//! [`ea_status::EA_INTERNAL_ERROR`] rather than undefined behavior.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use entaudit::axioms::{demo, DemoKind};
use entaudit::cli::{parse_axiom, run_audit_axiom};
use entaudit::measures::MeasureRegistry;
use entaudit::schmidt::schmidt_decompose;
use entaudit::states::{random_pure_state_seeded, State, StateFile};
use entaudit::EntanglementMeasure;

/// Status code returned by every fallible entry point. Anything other
/// than `EA_OK` leaves a message readable through `ea_last_error`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum ea_status {
    /// The call succeeded.
    EA_OK = 0,
    /// A required pointer argument was null.
    EA_NULL_ARGUMENT = 1,
    /// An argument was out of range or otherwise unusable.
    EA_INVALID_ARGUMENT = 2,
    /// A name or JSON payload failed to parse or validate.
    EA_PARSE_ERROR = 3,
    /// The operation is undefined for this measure/state combination.
    EA_UNSUPPORTED = 4,
    /// An internal invariant failed; the library state is unharmed.
    EA_INTERNAL_ERROR = 5,
}

/// A bipartite state (pure vector or density operator). Opaque.
#[allow(non_camel_case_types)]
pub struct ea_state {
    inner: State,
}

/// A registered entanglement measure. Opaque.
#[allow(non_camel_case_types)]
pub struct ea_measure {
    inner: EntanglementMeasure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into();
    let stored = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained a NUL byte").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs a body with the panic guard and per-call error reset shared by
/// every entry point.
fn guarded<F: FnOnce() -> ea_status>(body: F) -> ea_status {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unidentified panic".to_string());
            set_last_error(format!("internal error: {message}"));
            ea_status::EA_INTERNAL_ERROR
        }
    }
}

fn require_utf8<'a>(pointer: *const c_char, what: &str) -> Result<&'a str, ea_status> {
    if pointer.is_null() {
        set_last_error(format!("{what} is null"));
        return Err(ea_status::EA_NULL_ARGUMENT);
    }
    // Safety: the caller promises a NUL-terminated string; lifetime is
    // bounded by this call.
    unsafe { CStr::from_ptr(pointer) }.to_str().map_err(|_| {
        set_last_error(format!("{what} is not valid UTF-8"));
        ea_status::EA_PARSE_ERROR
    })
}

fn export_string(value: String, out: *mut *mut c_char, what: &str) -> ea_status {
    match CString::new(value) {
        Ok(owned) => {
            // Safety: `out` was checked non-null by the caller.
            unsafe { *out = owned.into_raw() };
            ea_status::EA_OK
        }
        Err(_) => {
            set_last_error(format!("{what} contained a NUL byte"));
            ea_status::EA_INTERNAL_ERROR
        }
    }
}

/// Parses a state from its JSON form.
///
/// On success `*out` owns the new state; release it with `ea_state_free`.
///
/// # Safety
///
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ea_state_from_json(
    json: *const c_char,
    out: *mut *mut ea_state,
) -> ea_status {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *out = std::ptr::null_mut() };
        let text = match require_utf8(json, "json") {
            Ok(text) => text,
            Err(status) => return status,
        };
        let file: StateFile = match serde_json::from_str(text) {
            Ok(file) => file,
            Err(err) => {
                set_last_error(format!("malformed state JSON: {err}"));
                return ea_status::EA_PARSE_ERROR;
            }
        };
        match file.into_state() {
            Ok(state) => {
                unsafe { *out = Box::into_raw(Box::new(ea_state { inner: state })) };
                ea_status::EA_OK
            }
            Err(err) => {
                set_last_error(format!("invalid state: {err}"));
                ea_status::EA_PARSE_ERROR
            }
        }
    })
}

/// Creates a Haar-random pure state on factor dimensions `d1 x d2`,
/// deterministic in `seed`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ea_state_random_pure(
    d1: usize,
    d2: usize,
    seed: u64,
    out: *mut *mut ea_state,
) -> ea_status {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *out = std::ptr::null_mut() };
        match random_pure_state_seeded(d1, d2, seed) {
            Ok(psi) => {
                unsafe {
                    *out = Box::into_raw(Box::new(ea_state {
                        inner: State::Pure(psi),
                    }));
                }
                ea_status::EA_OK
            }
            Err(err) => {
                set_last_error(format!("cannot sample a {d1} x {d2} state: {err}"));
                ea_status::EA_INVALID_ARGUMENT
            }
        }
    })
}

/// Serializes a state to its JSON form. The returned string is owned by
/// the caller; release it with `ea_string_free`.
///
/// # Safety
///
/// `state` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ea_state_to_json(
    state: *const ea_state,
    out: *mut *mut c_char,
) -> ea_status {
    guarded(|| {
        if state.is_null() || out.is_null() {
            set_last_error("state or out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *out = std::ptr::null_mut() };
        let file = StateFile::from_state(unsafe { &(*state).inner });
        let json = serde_json::to_string(&file).expect("state serialization is total");
        export_string(json, out, "state JSON")
    })
}

/// Reports the factor dimensions of a state.
///
/// # Safety
///
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_state_dims(
    state: *const ea_state,
    d1: *mut usize,
    d2: *mut usize,
) -> ea_status {
    guarded(|| {
        if state.is_null() || d1.is_null() || d2.is_null() {
            set_last_error("state, d1, or d2 is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        let dims = unsafe { (*state).inner.dims() };
        unsafe {
            *d1 = dims.0;
            *d2 = dims.1;
        }
        ea_status::EA_OK
    })
}

/// Reports whether a state is pure (`1`) or mixed (`0`).
///
/// # Safety
///
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_state_is_pure(state: *const ea_state, out: *mut bool) -> ea_status {
    guarded(|| {
        if state.is_null() || out.is_null() {
            set_last_error("state or out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *out = matches!((*state).inner, State::Pure(_)) };
        ea_status::EA_OK
    })
}

/// Releases a state created by this library. Null is a no-op.
///
/// # Safety
///
/// `state` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ea_state_free(state: *mut ea_state) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Resolves a measure by name: `svn`, `gamma`, `shannon-schmidt`, or
/// `svn-scaled:<c>` with a positive finite `c`.
///
/// # Safety
///
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ea_measure_new(
    name: *const c_char,
    out: *mut *mut ea_measure,
) -> ea_status {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *out = std::ptr::null_mut() };
        let name = match require_utf8(name, "name") {
            Ok(name) => name,
            Err(status) => return status,
        };
        match MeasureRegistry::with_builtins().resolve(name) {
            Ok(measure) => {
                unsafe { *out = Box::into_raw(Box::new(ea_measure { inner: measure })) };
                ea_status::EA_OK
            }
            Err(err) => {
                set_last_error(err.to_string());
                ea_status::EA_PARSE_ERROR
            }
        }
    })
}

/// Releases a measure created by this library. Null is a no-op.
///
/// # Safety
///
/// `measure` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ea_measure_free(measure: *mut ea_measure) {
    if !measure.is_null() {
        drop(unsafe { Box::from_raw(measure) });
    }
}

/// Evaluates a measure on a state, in nats. Mixed states require a
/// measure with a mixed-state evaluator (`EA_UNSUPPORTED` otherwise).
///
/// # Safety
///
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ea_evaluate(
    measure: *const ea_measure,
    state: *const ea_state,
    out: *mut f64,
) -> ea_status {
    guarded(|| {
        if measure.is_null() || state.is_null() || out.is_null() {
            set_last_error("measure, state, or out is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        let measure = unsafe { &(*measure).inner };
        match unsafe { &(*state).inner } {
            State::Pure(psi) => {
                unsafe { *out = measure.evaluate_pure(psi) };
                ea_status::EA_OK
            }
            State::Mixed(rho) => match measure.evaluate_mixed(rho) {
                Some(value) => {
                    unsafe { *out = value };
                    ea_status::EA_OK
                }
                None => {
                    set_last_error(format!(
                        "measure '{}' has no mixed-state evaluator",
                        measure.name()
                    ));
                    ea_status::EA_UNSUPPORTED
                }
            },
        }
    })
}

/// Writes the Schmidt coefficients of a pure state (descending) into
/// `buffer`. Call with a null `buffer` to query the count via `written`;
/// with a non-null `buffer`, `capacity` must cover the full count.
///
/// # Safety
///
/// `state` and `written` must be valid; `buffer`, when non-null, must
/// point to at least `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn ea_schmidt_coefficients(
    state: *const ea_state,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> ea_status {
    guarded(|| {
        if state.is_null() || written.is_null() {
            set_last_error("state or written is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        let State::Pure(psi) = (unsafe { &(*state).inner }) else {
            set_last_error("Schmidt coefficients are defined for pure states only");
            return ea_status::EA_UNSUPPORTED;
        };
        let form = schmidt_decompose(psi);
        let coefficients = form.coefficients();
        unsafe { *written = coefficients.len() };
        if buffer.is_null() {
            return ea_status::EA_OK;
        }
        if capacity < coefficients.len() {
            set_last_error(format!(
                "buffer holds {capacity} values but {} are needed",
                coefficients.len()
            ));
            return ea_status::EA_INVALID_ARGUMENT;
        }
        unsafe { std::ptr::copy_nonoverlapping(coefficients.as_ptr(), buffer, coefficients.len()) };
        ea_status::EA_OK
    })
}

/// Runs one postulate audit (axiom names as in the CLI: P1..P4, M1..M5,
/// L4, L7, PROP6) and returns the report as JSON. The status reflects
/// execution, not the audit verdict — read `passed` from the report.
///
/// # Safety
///
/// `measure` must come from this library; `axiom` must be NUL-terminated;
/// `report_json` must be valid. Release the string with `ea_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ea_audit(
    measure: *const ea_measure,
    axiom: *const c_char,
    samples: usize,
    seed: u64,
    tolerance: f64,
    report_json: *mut *mut c_char,
) -> ea_status {
    guarded(|| {
        if measure.is_null() || report_json.is_null() {
            set_last_error("measure or report_json is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *report_json = std::ptr::null_mut() };
        let axiom = match require_utf8(axiom, "axiom") {
            Ok(name) => name,
            Err(status) => return status,
        };
        let axiom = match parse_axiom(axiom) {
            Ok(axiom) => axiom,
            Err(err) => {
                set_last_error(err.to_string());
                return ea_status::EA_PARSE_ERROR;
            }
        };
        if samples == 0 {
            set_last_error("samples must be at least 1");
            return ea_status::EA_INVALID_ARGUMENT;
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            set_last_error(format!(
                "tolerance must be positive and finite (got {tolerance})"
            ));
            return ea_status::EA_INVALID_ARGUMENT;
        }
        let report = run_audit_axiom(
            unsafe { &(*measure).inner },
            axiom,
            samples,
            seed,
            tolerance,
        );
        let json = serde_json::to_string(&report).expect("report serialization is total");
        export_string(json, report_json, "report JSON")
    })
}

/// Runs a named demonstration (`p4-violation`, `m5-violation`,
/// `trace-asymmetry`) and returns its report as JSON.
///
/// # Safety
///
/// `name` must be NUL-terminated and `report_json` valid. Release the
/// string with `ea_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ea_demo(name: *const c_char, report_json: *mut *mut c_char) -> ea_status {
    guarded(|| {
        if report_json.is_null() {
            set_last_error("report_json is null");
            return ea_status::EA_NULL_ARGUMENT;
        }
        unsafe { *report_json = std::ptr::null_mut() };
        let name = match require_utf8(name, "name") {
            Ok(name) => name,
            Err(status) => return status,
        };
        let kind = match DemoKind::from_str(name) {
            Ok(kind) => kind,
            Err(err) => {
                set_last_error(err.to_string());
                return ea_status::EA_PARSE_ERROR;
            }
        };
        let report = demo(kind);
        let json = serde_json::to_string(&report).expect("report serialization is total");
        export_string(json, report_json, "report JSON")
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
///
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Returns the explanation of the most recent failure on this thread, or
/// null when the last call succeeded. The pointer stays valid until the
/// next library call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn ea_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |message| message.as_ptr())
    })
}
