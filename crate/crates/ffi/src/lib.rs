//! C ABI over `domipack`.
//!
//! Digraphs and solve results are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`DpStatus`]; on failure
//! a message is available from [`dp_last_error_message`] on the same thread.
//! Panics are caught at the boundary and reported as `DP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use domipack::io::parse_instance;
use domipack::{analysis, solve_with, validate, Digraph, ParameterKind, SolveOptions, SolveResult, SolveStatus, Validation, VertexSet};

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Outcome of an exact solve.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpSolveStatus {
    Optimal = 0,
    Infeasible = 1,
    BudgetExceeded = 2,
}

/// Opaque digraph handle.
pub struct DpDigraph(Digraph);

/// Opaque solve-result handle.
pub struct DpSolveResult(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

type Failure = (DpStatus, String);

fn null(what: &str) -> Failure {
    (DpStatus::NullPointer, format!("{what} is null"))
}

fn invalid(message: impl ToString) -> Failure {
    (DpStatus::InvalidArgument, message.to_string())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DpStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DpStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {message}"));
            DpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const usize, len: usize, what: &str) -> Result<&'a [usize], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next FFI call on the same thread.
#[no_mangle]
pub extern "C" fn dp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default per-solve budget (validity checks).
#[no_mangle]
pub extern "C" fn dp_default_budget() -> u64 {
    domipack::DEFAULT_BUDGET
}

/// Builds a digraph on `n` vertices from `arc_count` pairs stored flat in
/// `arcs` (`2 * arc_count` entries: tail, head, tail, head, ...).
///
/// # Safety
/// `arcs` must point to `2 * arc_count` readable values (or be NULL when
/// `arc_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_new(n: usize, arcs: *const usize, arc_count: usize, out: *mut *mut DpDigraph) -> DpStatus {
    guard(|| {
        let len = arc_count.checked_mul(2).ok_or_else(|| invalid("arc_count overflows"))?;
        let flat = slice(arcs, len, "arcs")?;
        let d = Digraph::new(n, flat.chunks_exact(2).map(|c| (c[0], c[1]))).map_err(invalid)?;
        store(out, Box::into_raw(Box::new(DpDigraph(d))), "out")
    })
}

/// Parses the `n m` / `u v` instance format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_parse(text: *const c_char, out: *mut *mut DpDigraph) -> DpStatus {
    guard(|| {
        let d = parse_instance(c_str(text, "text")?).map_err(|e| (DpStatus::ParseError, e.to_string()))?;
        store(out, Box::into_raw(Box::new(DpDigraph(d))), "out")
    })
}

/// The converse digraph as a new handle.
///
/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_converse(d: *const DpDigraph, out: *mut *mut DpDigraph) -> DpStatus {
    guard(|| {
        let d = deref(d, "digraph")?;
        store(out, Box::into_raw(Box::new(DpDigraph(d.0.converse()))), "out")
    })
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_free(d: *mut DpDigraph) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of vertices; 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_order(d: *const DpDigraph) -> usize {
    d.as_ref().map_or(0, |d| d.0.order())
}

/// Number of arcs; 0 for NULL.
///
/// # Safety
/// `d` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dp_digraph_arc_count(d: *const DpDigraph) -> usize {
    d.as_ref().map_or(0, |d| d.0.arc_count())
}

/// Solves `kind` (a parameter name such as "gamma-t2" or "l2") exactly.
///
/// # Safety
/// `d` must be a live handle, `kind` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_solve(
    d: *const DpDigraph,
    kind: *const c_char,
    budget: u64,
    pruned: bool,
    out: *mut *mut DpSolveResult,
) -> DpStatus {
    guard(|| {
        let d = deref(d, "digraph")?;
        let kind: ParameterKind = c_str(kind, "kind")?.parse().map_err(invalid)?;
        let options = if pruned { SolveOptions::pruned(budget) } else { SolveOptions::plain(budget) };
        let result = solve_with(&d.0, kind, options).map_err(invalid)?;
        store(out, Box::into_raw(Box::new(DpSolveResult(result))), "out")
    })
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dp_solve_result_status(r: *const DpSolveResult) -> DpSolveStatus {
    match r.as_ref().map(|r| r.0.status) {
        Some(SolveStatus::Optimal) => DpSolveStatus::Optimal,
        Some(SolveStatus::Infeasible) => DpSolveStatus::Infeasible,
        _ => DpSolveStatus::BudgetExceeded,
    }
}

/// Optimal value; `DP_STATUS_INVALID_ARGUMENT` when the solve was not optimal.
///
/// # Safety
/// `r` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_solve_result_value(r: *const DpSolveResult, out: *mut usize) -> DpStatus {
    guard(|| {
        let r = deref(r, "result")?;
        let value = r.0.value.ok_or_else(|| invalid(format!("no value: status {}", r.0.status)))?;
        store(out, value, "out")
    })
}

/// Copies the witness (ascending) into `buf`. `out_len` always receives the
/// witness size; `DP_STATUS_BUFFER_TOO_SMALL` if it exceeds `cap`.
///
/// # Safety
/// `buf` must have room for `cap` values (may be NULL when `cap` is 0);
/// `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_solve_result_witness(r: *const DpSolveResult, buf: *mut usize, cap: usize, out_len: *mut usize) -> DpStatus {
    guard(|| {
        let r = deref(r, "result")?;
        let witness = r.0.witness.as_ref().ok_or_else(|| invalid(format!("no witness: status {}", r.0.status)))?;
        store(out_len, witness.len(), "out_len")?;
        if witness.len() > cap {
            return Err((DpStatus::BufferTooSmall, format!("witness has {} vertices, buffer {cap}", witness.len())));
        }
        if !witness.is_empty() && buf.is_null() {
            return Err(null("buf"));
        }
        for (i, v) in witness.iter().enumerate() {
            buf.add(i).write(v);
        }
        Ok(())
    })
}

/// Validity checks performed by the solve.
///
/// # Safety
/// `r` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dp_solve_result_subsets_examined(r: *const DpSolveResult) -> u64 {
    r.as_ref().map_or(0, |r| r.0.subsets_examined)
}

/// # Safety
/// `r` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_solve_result_free(r: *mut DpSolveResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Checks `set` against `kind`. On a violation `*out_valid` is false and
/// `*out_vertex` names the first violating vertex.
///
/// # Safety
/// `set` must hold `len` values (or be NULL when `len` is 0); outputs writable.
#[no_mangle]
pub unsafe extern "C" fn dp_validate(
    d: *const DpDigraph,
    kind: *const c_char,
    set: *const usize,
    len: usize,
    out_valid: *mut bool,
    out_vertex: *mut usize,
) -> DpStatus {
    guard(|| {
        let d = deref(d, "digraph")?;
        let kind: ParameterKind = c_str(kind, "kind")?.parse().map_err(invalid)?;
        let set = VertexSet::from_indices(d.0.order(), slice(set, len, "set")?.iter().copied()).map_err(invalid)?;
        match validate(&d.0, &set, kind).map_err(invalid)? {
            Validation::Valid => store(out_valid, true, "out_valid"),
            Validation::Violation(v) => {
                store(out_valid, false, "out_valid")?;
                store(out_vertex, v.vertex, "out_vertex")
            }
        }
    })
}

/// Full bound audit as a JSON document. Free the string with [`dp_string_free`].
///
/// # Safety
/// `d` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dp_bounds_report_json(d: *const DpDigraph, budget: u64, out: *mut *mut c_char) -> DpStatus {
    guard(|| {
        let d = deref(d, "digraph")?;
        let report = analysis::bounds_report(&d.0, budget);
        let json = serde_json::to_string(&report).map_err(invalid)?;
        let c = CString::new(json).map_err(invalid)?;
        store(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
