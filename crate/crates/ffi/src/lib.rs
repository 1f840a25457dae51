//! C interface: opaque forest and elimination-forest handles, status codes,
//! and a per-thread last error message.
//!
//! Every function returns a [`BtdStatus`] or a plain value. Handles are
//! created by `btd_forest_parse`, `btd_forest_from_edges` and the solver
//! calls, and released with the matching `_free`. Panics never cross the boundary; they surface as
//! `BTD_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use btd_core::approx::btd_approx;
use btd_core::elim::{validate_ranking, EdgeRanking};
use btd_core::exact::{exact_btd, ExactOptions};
use btd_core::minrank::optimal_elimination_forest;
use btd_core::{EliminationForest, Error, Forest};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BtdStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    InvalidRanking = 4,
    GuardExceeded = 5,
    Precondition = 6,
    OutOfRange = 7,
    Internal = 8,
}

/// Opaque forest handle.
pub struct BtdForest {
    inner: Forest,
}

/// Opaque elimination forest handle.
pub struct BtdElim {
    inner: EliminationForest,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> BtdStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Format(_) => BtdStatus::Parse,
        Error::InvalidRanking(_) | Error::Coverage { .. } | Error::AlreadyRanked(_) => BtdStatus::InvalidRanking,
        Error::GuardExceeded { .. } => BtdStatus::GuardExceeded,
        Error::Precondition(_) | Error::Shape(_) | Error::Infeasible(_) => BtdStatus::Precondition,
        Error::UnknownEdge(_) | Error::UnknownVertex(_) => BtdStatus::OutOfRange,
        Error::Invariant(_) | Error::Io(_) => BtdStatus::Internal,
        _ => BtdStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> BtdStatus {
    let s = status_of(&e);
    set_error(e.to_string());
    s
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> BtdStatus) -> BtdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == BtdStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(_) => {
            set_error("internal panic");
            BtdStatus::Internal
        }
    }
}

fn null() -> BtdStatus {
    set_error("null pointer argument");
    BtdStatus::NullPointer
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn btd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn btd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an edge list or JSON forest document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn btd_forest_parse(text: *const c_char, out: *mut *mut BtdForest) -> BtdStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return null();
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            set_error("input is not UTF-8");
            return BtdStatus::Parse;
        };
        match Forest::parse_any(s) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(BtdForest { inner: f }));
                BtdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Builds a forest on vertices `0..vertices` from `edges` pairs laid out as
/// `u0, v0, u1, v1, ...`.
///
/// # Safety
/// `edges` must point to `2 * edge_count` values and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn btd_forest_from_edges(
    vertices: usize,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut BtdForest,
) -> BtdStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && edge_count > 0) {
            return null();
        }
        let pairs = if edge_count == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * edge_count) };
        let mut f = Forest::with_vertices(vertices);
        for (i, p) in pairs.chunks_exact(2).enumerate() {
            let (u, v) = (p[0] as usize, p[1] as usize);
            if u >= vertices || v >= vertices {
                set_error(format!("edge {i} has an endpoint outside 0..{vertices}"));
                return BtdStatus::OutOfRange;
            }
            if let Err(kind) = f.try_add_edge(u, v) {
                set_error(format!("edge {i}: {kind}"));
                return BtdStatus::Parse;
            }
        }
        *out = Box::into_raw(Box::new(BtdForest { inner: f }));
        BtdStatus::Ok
    })
}

/// # Safety
/// `forest` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn btd_forest_free(forest: *mut BtdForest) {
    if !forest.is_null() {
        drop(Box::from_raw(forest));
    }
}

/// # Safety
/// `forest` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn btd_forest_edge_count(forest: *const BtdForest) -> usize {
    forest.as_ref().map_or(0, |f| f.inner.edge_count())
}

/// # Safety
/// `forest` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn btd_forest_vertex_count(forest: *const BtdForest) -> usize {
    forest.as_ref().map_or(0, |f| f.inner.vertex_count())
}

unsafe fn solve(
    forest: *const BtdForest,
    out: *mut *mut BtdElim,
    f: impl FnOnce(&Forest) -> Result<EliminationForest, Error>,
) -> BtdStatus {
    guard(|| {
        let (Some(forest), false) = (forest.as_ref(), out.is_null()) else {
            return null();
        };
        match f(&forest.inner) {
            Ok(ef) => {
                *out = Box::into_raw(Box::new(BtdElim { inner: ef }));
                BtdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Minimum-height elimination forest.
///
/// # Safety
/// `forest` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn btd_rank_optimal(forest: *const BtdForest, out: *mut *mut BtdElim) -> BtdStatus {
    solve(forest, out, |f| Ok(optimal_elimination_forest(f)))
}

/// Elimination tree of width at most `b` and height at most the minimum
/// height plus `2b`. The forest must be a tree.
///
/// # Safety
/// `forest` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn btd_approx_tree(forest: *const BtdForest, b: usize, out: *mut *mut BtdElim) -> BtdStatus {
    solve(forest, out, |f| Ok(btd_approx(f, b)?.result))
}

/// Exact minimum height with width at most `b`. Refuses forests above the
/// default edge guard unless `force` is nonzero.
///
/// # Safety
/// `forest` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn btd_exact(forest: *const BtdForest, b: usize, force: i32, out: *mut *mut BtdElim) -> BtdStatus {
    let opts = ExactOptions { force: force != 0, ..ExactOptions::default() };
    solve(forest, out, |f| Ok(exact_btd(f, b, opts)?.witness))
}

/// Elimination forest from explicit levels, one per edge.
///
/// # Safety
/// `levels` must point to `len` values; `forest` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn btd_elim_from_levels(
    forest: *const BtdForest,
    levels: *const u32,
    len: usize,
    out: *mut *mut BtdElim,
) -> BtdStatus {
    if levels.is_null() && len > 0 {
        return null();
    }
    let lv = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(levels, len).to_vec() };
    solve(forest, out, |f| EliminationForest::from_levels(f, lv))
}

/// Number of ranking violations of `levels` on `forest`, written to
/// `violations`. A length mismatch is `BTD_STATUS_INVALID_RANKING`.
///
/// # Safety
/// `levels` must point to `len` values; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn btd_validate_levels(
    forest: *const BtdForest,
    levels: *const u32,
    len: usize,
    violations: *mut usize,
) -> BtdStatus {
    guard(|| {
        let Some(forest) = forest.as_ref() else { return null() };
        if violations.is_null() || (levels.is_null() && len > 0) {
            return null();
        }
        let lv = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(levels, len).to_vec() };
        match validate_ranking(&forest.inner, &EdgeRanking::new(lv)) {
            Ok(r) => {
                *violations = r.violations.len();
                BtdStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `elim` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn btd_elim_free(elim: *mut BtdElim) {
    if !elim.is_null() {
        drop(Box::from_raw(elim));
    }
}

/// # Safety
/// `elim` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn btd_elim_height(elim: *const BtdElim) -> u32 {
    elim.as_ref().map_or(0, |e| e.inner.height())
}

/// # Safety
/// `elim` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn btd_elim_width(elim: *const BtdElim) -> usize {
    elim.as_ref().map_or(0, |e| e.inner.width())
}

/// # Safety
/// `elim` must be a valid handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn btd_elim_edge_count(elim: *const BtdElim) -> usize {
    elim.as_ref().map_or(0, |e| e.inner.len())
}

/// Copies the levels into `buf`, which must hold `btd_elim_edge_count`
/// values; `len` is the capacity of `buf`.
///
/// # Safety
/// `elim` must be valid and `buf` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn btd_elim_levels(elim: *const BtdElim, buf: *mut u32, len: usize) -> BtdStatus {
    guard(|| {
        let Some(elim) = elim.as_ref() else { return null() };
        let lv = elim.inner.levels();
        if lv.is_empty() {
            return BtdStatus::Ok;
        }
        if buf.is_null() {
            return null();
        }
        if len < lv.len() {
            set_error(format!("buffer holds {len} levels, need {}", lv.len()));
            return BtdStatus::OutOfRange;
        }
        ptr::copy_nonoverlapping(lv.as_ptr(), buf, lv.len());
        BtdStatus::Ok
    })
}

/// Parent of `edge` in the elimination forest, or `-1` for a root.
///
/// # Safety
/// `elim` and `parent` must be valid.
#[no_mangle]
pub unsafe extern "C" fn btd_elim_parent(elim: *const BtdElim, edge: usize, parent: *mut i64) -> BtdStatus {
    guard(|| {
        let Some(elim) = elim.as_ref() else { return null() };
        if parent.is_null() {
            return null();
        }
        if edge >= elim.inner.len() {
            set_error(format!("edge {edge} out of range"));
            return BtdStatus::OutOfRange;
        }
        *parent = elim.inner.parent(edge).map_or(-1, |p| p as i64);
        BtdStatus::Ok
    })
}
