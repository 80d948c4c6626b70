//! C interface to `reeb-forge`.
//!
//! Graphs and plans are opaque handles. Every fallible call returns a
//! status code; on failure a message is kept per thread and can be read
//! with [`reeb_last_error_message`]. Strings handed out by the library are
//! released with [`reeb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use reeb_forge::io::{export_dot, load_graph, parse_plan, serialize_plan, to_canonical_json, ParsedGraph};
use reeb_forge::planner::{plan, ConstructionPlan, PlanError};
use reeb_forge::realizability::check;
use reeb_forge::verifier::verify;

pub const REEB_OK: i32 = 0;
pub const REEB_REJECTED: i32 = 1;
pub const REEB_INVALID_INPUT: i32 = 2;
pub const REEB_INTERNAL: i32 = 3;
pub const REEB_NULL_POINTER: i32 = 4;

/// Parsed and validated graph with its function.
pub struct ReebGraph {
    parsed: ParsedGraph,
}

/// Construction plan.
pub struct ReebPlan {
    plan: ConstructionPlan,
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

type Outcome = Result<i32, (i32, String)>;

fn guard(body: impl FnOnce() -> Outcome) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(code)) => code,
        Ok(Err((code, message))) => {
            set_error(message);
            code
        }
        Err(_) => {
            set_error("internal panic");
            REEB_INTERNAL
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (i32, String)> {
    if s.is_null() {
        return Err((REEB_NULL_POINTER, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (REEB_INVALID_INPUT, "input is not UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), (i32, String)> {
    let c = CString::new(text).map_err(|_| (REEB_INTERNAL, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn null(what: &str) -> (i32, String) {
    (REEB_NULL_POINTER, format!("null {what}"))
}

/// Parses and validates a graph document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_graph_parse(json: *const c_char, out: *mut *mut ReebGraph) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let text = read_str(json)?;
        let parsed = load_graph(text).map_err(|e| (REEB_INVALID_INPUT, e.to_string()))?;
        *out = Box::into_raw(Box::new(ReebGraph { parsed }));
        Ok(REEB_OK)
    })
}

/// # Safety
/// `graph` must come from [`reeb_graph_parse`] and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn reeb_graph_free(graph: *mut ReebGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Writes the realizability report as JSON. Returns `REEB_OK` if accepted,
/// `REEB_REJECTED` otherwise; the report is written in both cases.
///
/// # Safety
/// `graph` must be a live handle; `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_check(graph: *const ReebGraph, report_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if report_json.is_null() {
            return Err(null("output pointer"));
        }
        let report = check(&g.parsed.graph, &g.parsed.function_or_default());
        write_string(report_json, to_canonical_json(&report))?;
        Ok(if report.accepted() { REEB_OK } else { REEB_REJECTED })
    })
}

/// Builds a plan for an accepted graph.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_plan(graph: *const ReebGraph, out: *mut *mut ReebPlan) -> i32 {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let f = g.parsed.function_or_default();
        let report = check(&g.parsed.graph, &f);
        let p = plan(&g.parsed.graph, &f, &report).map_err(|e| {
            let code = match e {
                PlanError::NotCovered => REEB_REJECTED,
                PlanError::Internal { .. } => REEB_INTERNAL,
                _ => REEB_INVALID_INPUT,
            };
            (code, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(ReebPlan { plan: p }));
        Ok(REEB_OK)
    })
}

/// Canonical JSON of a plan.
///
/// # Safety
/// `plan` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_plan_to_json(plan: *const ReebPlan, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let p = plan.as_ref().ok_or_else(|| null("plan"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        write_string(out, serialize_plan(&p.plan))?;
        Ok(REEB_OK)
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_plan_from_json(json: *const c_char, out: *mut *mut ReebPlan) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = ptr::null_mut();
        let p = parse_plan(read_str(json)?).map_err(|e| (REEB_INVALID_INPUT, e.to_string()))?;
        *out = Box::into_raw(Box::new(ReebPlan { plan: p }));
        Ok(REEB_OK)
    })
}

/// # Safety
/// `plan` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn reeb_plan_free(plan: *mut ReebPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Verifies `plan` against `graph`. `REEB_REJECTED` if verification fails.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn reeb_verify(plan: *const ReebPlan, graph: *const ReebGraph) -> i32 {
    guard(|| {
        let p = plan.as_ref().ok_or_else(|| null("plan"))?;
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        verify(&p.plan, &g.parsed.graph, &g.parsed.function_or_default())
            .map_err(|e| (REEB_REJECTED, e.to_string()))?;
        Ok(REEB_OK)
    })
}

/// DOT rendering of a graph.
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn reeb_export_dot(graph: *const ReebGraph, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        write_string(out, export_dot(&g.parsed.graph))?;
        Ok(REEB_OK)
    })
}

/// # Safety
/// `s` must come from this library and not be freed yet, or be null.
#[no_mangle]
pub unsafe extern "C" fn reeb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn reeb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
