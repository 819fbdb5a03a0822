//! C ABI over `clique_transversal`.
//!
//! Graphs and results are opaque handles owned by the caller and released
//! with the matching `*_free`. Every fallible call returns a [`CtStatus`];
//! the message of the last failure on the calling thread is available from
//! [`ct_last_error`]. Vertex ids are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clique_transversal::engine::{replay_verify, EngineError};
use clique_transversal::graph::{is_four_chordal, parse_graph, Graph};
use clique_transversal::oracle::min_transversal_exact;
use clique_transversal::{bound, solve_with_mode, Mode, TransversalResult};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotFourChordal = 4,
    Precondition = 5,
    CapExceeded = 6,
    BoundMiss = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CtMode {
    Auto = 0,
    ThmA = 1,
    ThmB = 2,
    Basic = 3,
}

/// Opaque graph handle.
pub struct CtGraph(Graph);

/// Opaque solve result handle.
pub struct CtResult(TransversalResult);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn guarded(f: impl FnOnce() -> CtStatus) -> CtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside the library");
            CtStatus::Panic
        }
    }
}

fn fail(status: CtStatus, msg: impl Into<String>) -> CtStatus {
    set_error(msg);
    status
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ct_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let k = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, k);
            *buf.add(k) = 0;
        }
        msg.len()
    })
}

#[no_mangle]
pub extern "C" fn ct_bound(n: usize) -> usize {
    bound(n)
}

/// Creates an edgeless graph on `n` vertices.
#[no_mangle]
pub extern "C" fn ct_graph_new(n: usize) -> *mut CtGraph {
    Box::into_raw(Box::new(CtGraph(Graph::new(n))))
}

/// Parses the `p <n> <m>` / `e <u> <v>` text format (1-indexed).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_parse(text: *const c_char, out: *mut *mut CtGraph) -> CtStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(CtStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(CtStatus::ParseError, "input is not UTF-8");
        };
        match parse_graph(s) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(CtGraph(g)));
                CtStatus::Ok
            }
            Err(e) => fail(CtStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_free(g: *mut CtGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_add_edge(g: *mut CtGraph, u: usize, v: usize) -> CtStatus {
    guarded(|| {
        let Some(g) = g.as_mut() else {
            return fail(CtStatus::NullPointer, "null graph");
        };
        match g.0.add_edge(u, v) {
            Ok(_) => CtStatus::Ok,
            Err(e) => fail(CtStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Number of vertices, 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_graph_n(g: *const CtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// `Ok` if the graph is 4-chordal, else `NotFourChordal`.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ct_is_four_chordal(g: *const CtGraph) -> CtStatus {
    guarded(|| {
        let Some(g) = g.as_ref() else {
            return fail(CtStatus::NullPointer, "null graph");
        };
        match is_four_chordal(&g.0) {
            Ok(()) => CtStatus::Ok,
            Err(w) => fail(CtStatus::NotFourChordal, w.to_string()),
        }
    })
}

/// Runs the engine. On `Ok`, `*out` receives a result handle.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_solve(g: *const CtGraph, mode: CtMode, out: *mut *mut CtResult) -> CtStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out.is_null()) else {
            return fail(CtStatus::NullPointer, "null argument");
        };
        let mode = match mode {
            CtMode::Auto => Mode::Auto,
            CtMode::ThmA => Mode::ThmA,
            CtMode::ThmB => Mode::ThmB,
            CtMode::Basic => Mode::Basic,
        };
        match solve_with_mode(&g.0, mode) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CtResult(r)));
                CtStatus::Ok
            }
            Err(e) => {
                let status = match e {
                    EngineError::NotFourChordal(_) => CtStatus::NotFourChordal,
                    EngineError::Precondition(_) => CtStatus::Precondition,
                    EngineError::BoundMiss { .. } => CtStatus::BoundMiss,
                    EngineError::Internal { .. } => CtStatus::Internal,
                };
                fail(status, e.to_string())
            }
        }
    })
}

/// # Safety
/// `r` must be null or a result handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ct_result_free(r: *mut CtResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ct_result_size(r: *const CtResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.size())
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ct_result_saved(r: *const CtResult) -> i64 {
    r.as_ref().map_or(0, |r| r.0.saved)
}

/// Whether the size is within `ct_bound(n)`.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn ct_result_bound_ok(r: *const CtResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.bound_ok)
}

/// Copies up to `len` red vertices into `buf`; returns the total count.
///
/// # Safety
/// `r` must be a live result handle; `buf` null or `len` writable slots.
#[no_mangle]
pub unsafe extern "C" fn ct_result_red(r: *const CtResult, buf: *mut usize, len: usize) -> usize {
    let Some(r) = r.as_ref() else { return 0 };
    if !buf.is_null() {
        let k = r.0.red.len().min(len);
        ptr::copy_nonoverlapping(r.0.red.as_ptr(), buf, k);
    }
    r.0.red.len()
}

/// Copies the JSON-lines trace into `buf` (NUL terminated, truncated to
/// `len`); returns its full length in bytes.
///
/// # Safety
/// `r` must be a live result handle; `buf` null or `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ct_result_trace(r: *const CtResult, buf: *mut c_char, len: usize) -> usize {
    let Some(r) = r.as_ref() else { return 0 };
    let text = r.0.trace.to_jsonl();
    if !buf.is_null() && len > 0 {
        let k = text.len().min(len - 1);
        ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, k);
        *buf.add(k) = 0;
    }
    text.len()
}

/// Replays the result's trace against `g`.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ct_result_verify(r: *const CtResult, g: *const CtGraph) -> CtStatus {
    guarded(|| {
        let (Some(r), Some(g)) = (r.as_ref(), g.as_ref()) else {
            return fail(CtStatus::NullPointer, "null argument");
        };
        match replay_verify(&r.0.trace, &g.0) {
            Ok(_) => CtStatus::Ok,
            Err(v) => fail(CtStatus::Internal, v.to_string()),
        }
    })
}

/// Exact minimum transversal size, searching up to `cap`.
///
/// # Safety
/// `g` must be a live handle; `out_size` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ct_min_transversal(g: *const CtGraph, cap: usize, out_size: *mut usize) -> CtStatus {
    guarded(|| {
        let (Some(g), false) = (g.as_ref(), out_size.is_null()) else {
            return fail(CtStatus::NullPointer, "null argument");
        };
        match min_transversal_exact(&g.0, cap) {
            Ok(r) => {
                *out_size = r.minimum_size;
                CtStatus::Ok
            }
            Err(e) => fail(CtStatus::CapExceeded, e.to_string()),
        }
    })
}
