//! C ABI over `tro-core`.
//!
//! Every fallible function returns a [`TroStatus`]; on failure the message is
//! available from [`tro_last_error`] on the same thread. Strings handed out by
//! this library must be released with [`tro_string_free`], graphs with
//! [`tro_graph_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tro_core::coi::{detect_conflicts, findings_to_json};
use tro_core::date::parse_date;
use tro_core::ingest::ingest_csv;
use tro_core::mint::{mint_role_iri, normalize_name, MintConfig};
use tro_core::rdf::{canonical_ntriples, parse_turtle, serialize_turtle, Graph, Iri};
use tro_core::validate::{check, max_severity, Severity};
use tro_core::vocab::{builtin_vocabulary, vocabulary_graph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TroStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IngestError = 4,
    InvalidArgument = 5,
    Panic = 6,
}

/// Highest severity in a validation report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TroSeverity {
    None = 0,
    Info = 1,
    Warn = 2,
    Error = 3,
}

/// Opaque graph handle.
pub struct TroGraph {
    graph: Graph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(TroStatus, String);

type FfiResult<T> = Result<T, Failure>;

fn fail<T>(status: TroStatus, msg: impl Into<String>) -> FfiResult<T> {
    Err(Failure(status, msg.into()))
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> TroStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TroStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TroStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(TroStatus::NullArgument, format!("{name} is null"));
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Ok(s),
        Err(e) => fail(TroStatus::InvalidUtf8, format!("{name}: {e}")),
    }
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> FfiResult<Option<&'a str>> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn graph_arg<'a>(g: *const TroGraph) -> FfiResult<&'a Graph> {
    match g.as_ref() {
        Some(g) => Ok(&g.graph),
        None => fail(TroStatus::NullArgument, "graph is null"),
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return fail(TroStatus::NullArgument, "output pointer is null");
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    if out.is_null() {
        return fail(TroStatus::NullArgument, "output pointer is null");
    }
    match CString::new(s) {
        Ok(c) => write_out(out, c.into_raw()),
        Err(_) => fail(TroStatus::InvalidArgument, "result contains a NUL byte"),
    }
}

fn mint_config(base: Option<&str>) -> FfiResult<MintConfig> {
    let Some(base) = base else {
        return Ok(MintConfig::default());
    };
    Iri::new(base)
        .map_err(|e| Failure(TroStatus::InvalidArgument, e.to_string()))
        .and_then(|iri| {
            MintConfig::new(iri).map_err(|e| Failure(TroStatus::InvalidArgument, e.to_string()))
        })
}

fn boxed(graph: Graph) -> *mut TroGraph {
    Box::into_raw(Box::new(TroGraph { graph }))
}

/// Last error message on this thread, or null. Valid until the next call
/// into this library from the same thread; do not free.
#[no_mangle]
pub extern "C" fn tro_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tro_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_new(out: *mut *mut TroGraph) -> TroStatus {
    guard(|| write_out(out, boxed(Graph::with_default_prefixes())))
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_free(g: *mut TroGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of triples, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_len(g: *const TroGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.len())
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_parse_turtle(
    text: *const c_char,
    out: *mut *mut TroGraph,
) -> TroStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let graph =
            parse_turtle(text).map_err(|e| Failure(TroStatus::ParseError, e.to_string()))?;
        write_out(out, boxed(graph))
    })
}

/// Builds a graph from contract and role CSV text. `base` may be null for
/// the default data namespace. `rejected` may be null; otherwise it receives
/// the number of rows skipped as invalid.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_from_csv(
    contracts_csv: *const c_char,
    roles_csv: *const c_char,
    base: *const c_char,
    out: *mut *mut TroGraph,
    rejected: *mut usize,
) -> TroStatus {
    guard(|| {
        let contracts = str_arg(contracts_csv, "contracts_csv")?;
        let roles = str_arg(roles_csv, "roles_csv")?;
        let cfg = mint_config(opt_str_arg(base, "base")?)?;
        let (graph, report) = ingest_csv(contracts, roles, &cfg)
            .map_err(|e| Failure(TroStatus::IngestError, e.to_string()))?;
        if !rejected.is_null() {
            rejected.write(report.rejected.len());
        }
        write_out(out, boxed(graph))
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_to_turtle(
    g: *const TroGraph,
    out: *mut *mut c_char,
) -> TroStatus {
    guard(|| write_string(out, serialize_turtle(graph_arg(g)?)))
}

/// Sorted N-Triples. Fails with `InvalidArgument` if the graph has blank nodes.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_to_ntriples(
    g: *const TroGraph,
    out: *mut *mut c_char,
) -> TroStatus {
    guard(|| {
        let nt = canonical_ntriples(graph_arg(g)?)
            .map_err(|e| Failure(TroStatus::InvalidArgument, e.to_string()))?;
        write_string(out, nt)
    })
}

/// Validates against the builtin vocabulary. `report_json` receives the JSON
/// report; `max` (nullable) the highest severity found.
///
/// # Safety
/// `g` must be a live handle and `report_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_validate(
    g: *const TroGraph,
    report_json: *mut *mut c_char,
    max: *mut TroSeverity,
) -> TroStatus {
    guard(|| {
        let report = check(graph_arg(g)?, &builtin_vocabulary());
        let severity = match max_severity(&report) {
            None => TroSeverity::None,
            Some(Severity::Info) => TroSeverity::Info,
            Some(Severity::Warn) => TroSeverity::Warn,
            Some(Severity::Error) => TroSeverity::Error,
        };
        write_string(report_json, report.to_json())?;
        if !max.is_null() {
            max.write(severity);
        }
        Ok(())
    })
}

/// Candidate conflict-of-interest findings as a JSON array. Does not
/// validate first.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_graph_detect(g: *const TroGraph, out: *mut *mut c_char) -> TroStatus {
    guard(|| write_string(out, findings_to_json(&detect_conflicts(graph_arg(g)?))))
}

/// The builtin vocabulary as a Turtle ontology.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_vocabulary_turtle(out: *mut *mut c_char) -> TroStatus {
    guard(|| {
        write_string(
            out,
            serialize_turtle(&vocabulary_graph(&builtin_vocabulary())),
        )
    })
}

/// # Safety
/// `name` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tro_normalize_name(
    name: *const c_char,
    out: *mut *mut c_char,
) -> TroStatus {
    guard(|| {
        let slug = normalize_name(str_arg(name, "name")?)
            .map_err(|e| Failure(TroStatus::InvalidArgument, e.to_string()))?;
        write_string(out, slug.to_string())
    })
}

/// Dates are `YYYY-MM-DD`; `end` and `base` may be null.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tro_mint_role_iri(
    base: *const c_char,
    person: *const c_char,
    role_type: *const c_char,
    start: *const c_char,
    end: *const c_char,
    org: *const c_char,
    out: *mut *mut c_char,
) -> TroStatus {
    guard(|| {
        let cfg = mint_config(opt_str_arg(base, "base")?)?;
        let date = |s: &str| {
            parse_date(s)
                .ok_or_else(|| Failure(TroStatus::InvalidArgument, format!("bad date {s:?}")))
        };
        let start = date(str_arg(start, "start")?)?;
        let end = opt_str_arg(end, "end")?.map(date).transpose()?;
        let iri = mint_role_iri(
            &cfg,
            str_arg(person, "person")?,
            str_arg(role_type, "role_type")?,
            start,
            end,
            str_arg(org, "org")?,
        )
        .map_err(|e| Failure(TroStatus::InvalidArgument, e.to_string()))?;
        write_string(out, iri.into_string())
    })
}
