//! C ABI over `pcgroup`. Graphs are opaque handles; strings returned through
//! out-pointers are owned by the caller and released with `pcg_string_free`.
//! Every call returns a `PcgStatus`; on failure `pcg_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pcgroup::solver::{self, LiteralSystem};
use pcgroup::system::EqSystem;
use pcgroup::{structure, trace, CommutationGraph, Error, Word};

#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcgStatus {
    Ok = 0,
    ParseError = 1,
    InvalidInput = 2,
    DomainError = 3,
    GuardExceeded = 4,
    InvariantViolated = 5,
    IoError = 6,
    NullPointer = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

/// Opaque commutation graph.
pub struct PcgGraph {
    inner: CommutationGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PcgStatus {
    match e {
        Error::Parse { .. } => PcgStatus::ParseError,
        Error::Invalid(_) => PcgStatus::InvalidInput,
        Error::Domain(_) => PcgStatus::DomainError,
        Error::Guard(_) => PcgStatus::GuardExceeded,
        Error::Invariant(_) => PcgStatus::InvariantViolated,
        Error::Io(_) => PcgStatus::IoError,
    }
}

enum Fail {
    Status(PcgStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guarded(f: impl FnOnce() -> Result<(), Fail>) -> PcgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcgStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside pcgroup".into());
            PcgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Status(PcgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Status(PcgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn graph_arg<'a>(g: *const PcgGraph) -> Result<&'a CommutationGraph, Fail> {
    g.as_ref().map(|h| &h.inner).ok_or_else(|| Fail::Status(PcgStatus::NullPointer, "graph is null".into()))
}

unsafe fn word_arg(g: &CommutationGraph, p: *const c_char, what: &str) -> Result<Word, Fail> {
    Ok(trace::parse_word(g, str_arg(p, what)?)?)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Status(PcgStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Status(PcgStatus::InvariantViolated, "interior NUL".into()))?;
    put(out, c.into_raw())
}

/// Parses graph text (`gens: a b c` / `edge: a b` lines) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcg_graph_parse(text: *const c_char, out: *mut *mut PcgGraph) -> PcgStatus {
    guarded(|| {
        let g = CommutationGraph::parse(str_arg(text, "text")?)?;
        put(out, Box::into_raw(Box::new(PcgGraph { inner: g })))
    })
}

/// # Safety
/// `g` must come from `pcg_graph_parse` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pcg_graph_free(g: *mut PcgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of generators, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pcg_graph_size(g: *const PcgGraph) -> usize {
    g.as_ref().map_or(0, |h| h.inner.len())
}

/// Canonical form of `word`; `"1"` for the identity.
///
/// # Safety
/// Pointers must be valid; `*out` must later go to `pcg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pcg_normalize(g: *const PcgGraph, word: *const c_char, out: *mut *mut c_char) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let w = word_arg(g, word, "word")?;
        put_string(out, trace::format_word(g, &trace::normalize(g, &w)))
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pcg_equals(g: *const PcgGraph, u: *const c_char, v: *const c_char, out: *mut bool) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let (u, v) = (word_arg(g, u, "u")?, word_arg(g, v, "v")?);
        put(out, trace::equals(g, &u, &v))
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn pcg_is_geodesic(g: *const PcgGraph, word: *const c_char, out: *mut bool) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let w = word_arg(g, word, "word")?;
        put(out, trace::is_geodesic(g, &w))
    })
}

/// `{"conjugate": bool, "conjugator": word|null}` with conjugator·u·conjugator⁻¹ = v.
///
/// # Safety
/// Pointers must be valid; `*out` must later go to `pcg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pcg_conjugate_json(
    g: *const PcgGraph,
    u: *const c_char,
    v: *const c_char,
    out: *mut *mut c_char,
) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let (u, v) = (word_arg(g, u, "u")?, word_arg(g, v, "v")?);
        let j = match structure::conjugate(g, &u, &v)? {
            Some(t) => serde_json::json!({"conjugate": true, "conjugator": trace::format_word(g, &t)}),
            None => serde_json::json!({"conjugate": false, "conjugator": null}),
        };
        put_string(out, j.to_string())
    })
}

/// Centraliser description as JSON (conjugator, core, cyclic_parts,
/// abelian_part, generators, cyclic).
///
/// # Safety
/// Pointers must be valid; `*out` must later go to `pcg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pcg_centralizer_json(g: *const PcgGraph, word: *const c_char, out: *mut *mut c_char) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let w = word_arg(g, word, "word")?;
        put_string(out, structure::centraliser(g, &w)?.to_json(g).to_string())
    })
}

/// `{"root": word, "exponent": n}` with root^n = word and n maximal.
///
/// # Safety
/// Pointers must be valid; `*out` must later go to `pcg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pcg_root_json(g: *const PcgGraph, word: *const c_char, out: *mut *mut c_char) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let w = word_arg(g, word, "word")?;
        let (r, k) = trace::root(g, &w)?;
        put_string(out, serde_json::json!({"root": trace::format_word(g, &r), "exponent": k}).to_string())
    })
}

/// All solutions of a system (same text format as the CLI) with values in
/// the ball of `radius`, as JSON. `max_checks` = 0 selects the default guard.
///
/// # Safety
/// Pointers must be valid; `*out` must later go to `pcg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pcg_solve_json(
    g: *const PcgGraph,
    system: *const c_char,
    radius: usize,
    max_checks: u64,
    out: *mut *mut c_char,
) -> PcgStatus {
    guarded(|| {
        let g = graph_arg(g)?;
        let sys = EqSystem::parse(g, str_arg(system, "system")?)?;
        let limit = if max_checks == 0 { solver::DEFAULT_MAX_CHECKS } else { max_checks };
        let v = solver::solve_bounded(g, &LiteralSystem::from_system(g, &sys), radius, limit)?;
        put_string(out, v.to_json(g).to_string())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pcg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pcg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
