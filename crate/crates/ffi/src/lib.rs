//! C ABI over `goodcolour`.
//!
//! Hypergraphs and instances are opaque heap handles released with their
//! `_free` function. Every fallible call returns a [`GcStatus`]; on failure
//! `gc_last_error` describes the most recent error on the calling thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`gc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use goodcolour::bounds::{check_key, closed_form_bound, optimize_beta, Application};
use goodcolour::colouring::{count_good, ColouringError};
use goodcolour::exact::Beta;
use goodcolour::io::{parse_graph, parse_instance};
use goodcolour::{Hypergraph, Instance, ListAssignment};
use serde_json::Value;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    Panic = 6,
}

/// Opaque hypergraph handle.
pub struct GcHypergraph(Hypergraph);

/// Opaque instance handle.
pub struct GcInstance(Instance);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: GcStatus, msg: impl Into<String>) -> GcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> GcStatus) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == GcStatus::Ok {
                set_error("");
            }
            status
        }
        Err(_) => fail(GcStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GcStatus> {
    if s.is_null() {
        return Err(fail(GcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(GcStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> GcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            GcStatus::Ok
        }
        Err(_) => fail(GcStatus::InvalidArgument, "output contains a NUL byte"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),*) => {
        $(if $p.is_null() {
            return fail(GcStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })*
    };
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an edge list or graph JSON.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_hypergraph_parse(text: *const c_char, out: *mut *mut GcHypergraph) -> GcStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(text));
        match parse_graph(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(GcHypergraph(g)));
                GcStatus::Ok
            }
            Err(e) => fail(GcStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `graph` must be null or come from `gc_hypergraph_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_hypergraph_free(graph: *mut GcHypergraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gc_hypergraph_num_vertices(graph: *const GcHypergraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_vertices())
}

/// # Safety
/// `graph` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gc_hypergraph_num_edges(graph: *const GcHypergraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_edges())
}

/// # Safety
/// `graph` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gc_hypergraph_max_degree(graph: *const GcHypergraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.max_degree())
}

/// Parses an instance from JSON (or an edge list, giving the proper instance).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_instance_parse(text: *const c_char, out: *mut *mut GcInstance) -> GcStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(text));
        match parse_instance(text) {
            Ok(i) => {
                *out = Box::into_raw(Box::new(GcInstance(i)));
                GcStatus::Ok
            }
            Err(e) => fail(GcStatus::ParseError, e.to_string()),
        }
    })
}

/// The proper-colouring instance of a hypergraph. The hypergraph is copied.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_instance_proper(graph: *const GcHypergraph, out: *mut *mut GcInstance) -> GcStatus {
    guard(|| {
        non_null!(graph, out);
        *out = Box::into_raw(Box::new(GcInstance(Instance::proper((*graph).0.clone()))));
        GcStatus::Ok
    })
}

/// # Safety
/// `instance` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_instance_free(instance: *mut GcInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Evaluates the key condition with `c` colours.
///
/// # Safety
/// `instance` must be a live handle; `satisfied` and `min_slack` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gc_check_key(
    instance: *const GcInstance,
    beta: f64,
    c: u64,
    satisfied: *mut bool,
    min_slack: *mut f64,
) -> GcStatus {
    guard(|| {
        non_null!(instance, satisfied, min_slack);
        match check_key(&(*instance).0.weight_profile(), beta, c) {
            Ok(r) => {
                *satisfied = r.satisfied;
                *min_slack = r.min_slack;
                GcStatus::Ok
            }
            Err(e) => fail(GcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Best `beta >= 1` and the colour count it needs.
///
/// # Safety
/// `instance` must be a live handle; `beta` and `c` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gc_optimize_beta(instance: *const GcInstance, beta: *mut f64, c: *mut u64) -> GcStatus {
    guard(|| {
        non_null!(instance, beta, c);
        let opt = optimize_beta(&(*instance).0.weight_profile());
        *beta = opt.beta;
        *c = opt.c;
        GcStatus::Ok
    })
}

/// Exact number of good colourings with lists `{1..colours}`, written as a
/// decimal string. `colours = 0` uses the lists stored in the instance.
///
/// # Safety
/// `instance` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_count_good(
    instance: *const GcInstance,
    colours: u64,
    budget: u64,
    out: *mut *mut c_char,
) -> GcStatus {
    guard(|| {
        non_null!(instance, out);
        let inst = &(*instance).0;
        let lists = match (colours, inst.lists()) {
            (0, Some(l)) => l.clone(),
            (0, None) => return fail(GcStatus::InvalidArgument, "instance has no lists; pass colours > 0"),
            (c, _) => ListAssignment::uniform(inst.graph().num_vertices(), c as usize),
        };
        match count_good(inst, &lists, budget as u128) {
            Ok(r) => write_string(out, r.count.to_string()),
            Err(e @ ColouringError::BudgetExceeded { .. }) => fail(GcStatus::BudgetExceeded, e.to_string()),
            Err(e) => fail(GcStatus::InvalidArgument, e.to_string()),
        }
    })
}

fn application(params: &Value) -> Result<Application, String> {
    let field = |name: &str| -> Result<u64, String> {
        params
            .get(name)
            .and_then(Value::as_u64)
            .ok_or_else(|| format!("missing integer `{name}`"))
    };
    let app = params.get("app").and_then(Value::as_str).ok_or("missing string `app`")?;
    Ok(match app {
        "proper-hypergraph" => Application::ProperHypergraph {
            r: field("r")?,
            delta: field("delta")?,
        },
        "proper-graph" => {
            let beta = match params.get("beta") {
                Some(Value::String(s)) => s.parse::<Beta>()?,
                Some(v) => Beta::real(v.as_f64().ok_or("`beta` must be a number or string")?),
                None => return Err("missing `beta`".into()),
            };
            Application::ProperGraph {
                delta: field("delta")?,
                beta,
            }
        }
        "star" => Application::Star { delta: field("delta")? },
        "nonrepetitive" => Application::Nonrepetitive { delta: field("delta")? },
        "frugal" => Application::Frugal {
            delta: field("delta")?,
            k: field("k")?,
        },
        "transversal" => Application::Transversal {
            r: field("r")?,
            t: field("t")?,
        },
        "ramsey" => Application::Ramsey {
            k: field("k")?,
            c: field("c")?,
            d_k: params.get("d_k").and_then(Value::as_u64),
        },
        "ksat" => Application::KSat { k: field("k")? },
        other => return Err(format!("unknown application `{other}`")),
    })
}

/// Closed-form bound for a JSON request such as
/// `{"app": "proper-hypergraph", "r": 3, "delta": 4}`; writes the JSON result.
///
/// # Safety
/// `request` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_closed_form_json(request: *const c_char, out: *mut *mut c_char) -> GcStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(read_str(request));
        let params: Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(GcStatus::ParseError, e.to_string()),
        };
        let app = match application(&params) {
            Ok(a) => a,
            Err(e) => return fail(GcStatus::InvalidArgument, e),
        };
        match closed_form_bound(&app) {
            Ok(cf) => write_string(out, serde_json::to_string(&cf).expect("serializable")),
            Err(e) => fail(GcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
