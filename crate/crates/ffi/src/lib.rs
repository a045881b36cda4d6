//! C interface to `cinfring`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call
//! returns a [`CinfStatus`]; on failure the message is available from
//! [`cinf_last_error`] on the same thread. Strings returned through `out`
//! parameters are released with [`cinf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cinfring::cmodule::{cotangent, fiber_at_point};
use cinfring::cring::{find_r_points, is_r_point, RPoint, SearchParams};
use cinfring::workspace::Workspace;
use cinfring::{parse, Error, Ring, RingPresentation, SmoothExpr};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CinfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Domain = 4,
    Arity = 5,
    Mismatch = 6,
    NotPolynomial = 7,
    NotAPoint = 8,
    OutOfRange = 9,
    Workspace = 10,
    Panic = 11,
    Other = 12,
}

/// A parsed smooth expression.
pub struct CinfExpr(SmoothExpr);

/// A finitely presented ring `C∞(ℝⁿ)/I`.
pub struct CinfRing(Ring);

/// Real points found by a search, in canonical order.
pub struct CinfPoints(Vec<RPoint>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(CinfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Syntax { .. } | Error::UnknownPrimitive { .. } => CinfStatus::Syntax,
            Error::Domain(_) => CinfStatus::Domain,
            Error::VariableOutOfRange { .. }
            | Error::ArityMismatch { .. }
            | Error::Dimension(_) => CinfStatus::Arity,
            Error::OwnerMismatch | Error::Mismatch(_) => CinfStatus::Mismatch,
            Error::NotPolynomial => CinfStatus::NotPolynomial,
            _ => CinfStatus::Other,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: CinfStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, message.into()))
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CinfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CinfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            CinfStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return fail(CinfStatus::NullPointer, "null string");
    }
    CStr::from_ptr(s)
        .to_str()
        .or_else(|_| fail(CinfStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .map_or_else(|| fail(CinfStatus::NullPointer, "null handle"), Ok)
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return fail(CinfStatus::NullPointer, "null coordinate array");
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(CinfStatus::NullPointer, "null output pointer");
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).or_else(|_| fail(CinfStatus::Other, "string contains NUL"))?;
    put(out, c.into_raw())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// The message of the last failed call on this thread, or null. The
/// pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn cinf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cinf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_expr_parse(
    src: *const c_char,
    out: *mut *mut CinfExpr,
) -> CinfStatus {
    guard(|| {
        let e = parse(text(src)?)?;
        put(out, boxed(CinfExpr(e)))
    })
}

/// Canonical text of `e`.
///
/// # Safety
/// `e` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_expr_to_string(
    e: *const CinfExpr,
    out: *mut *mut c_char,
) -> CinfStatus {
    guard(|| put_string(out, handle(e)?.0.to_string()))
}

/// # Safety
/// `e` is a live handle, `point` holds `len` values, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_expr_evaluate(
    e: *const CinfExpr,
    point: *const f64,
    len: usize,
    out: *mut f64,
) -> CinfStatus {
    guard(|| {
        let value = handle(e)?
            .0
            .evaluate(slice(point, len)?)
            .map_err(Error::from)?;
        put(out, value)
    })
}

/// Partial derivative in `x{var}`, simplified.
///
/// # Safety
/// `e` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_expr_differentiate(
    e: *const CinfExpr,
    var: usize,
    out: *mut *mut CinfExpr,
) -> CinfStatus {
    guard(|| put(out, boxed(CinfExpr(handle(e)?.0.differentiate(var)))))
}

/// # Safety
/// `e` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cinf_expr_free(e: *mut CinfExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// `C∞(ℝ^arity)` modulo the `count` relations in `relations`.
///
/// # Safety
/// `relations` holds `count` NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_new(
    arity: usize,
    relations: *const *const c_char,
    count: usize,
    out: *mut *mut CinfRing,
) -> CinfStatus {
    guard(|| {
        if count > 0 && relations.is_null() {
            return fail(CinfStatus::NullPointer, "null relation array");
        }
        let rels = (0..count)
            .map(|i| Ok(parse(text(*relations.add(i))?)?))
            .collect::<Result<Vec<_>, Failure>>()?;
        put(out, boxed(CinfRing(RingPresentation::new(arity, rels)?)))
    })
}

/// Number of generators; 0 for a null handle.
///
/// # Safety
/// `r` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_arity(r: *const CinfRing) -> usize {
    r.as_ref().map_or(0, |r| r.0.arity())
}

/// # Safety
/// `r` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_to_string(
    r: *const CinfRing,
    out: *mut *mut c_char,
) -> CinfStatus {
    guard(|| put_string(out, handle(r)?.0.to_string()))
}

/// Real points in the cube `[lo, hi]^arity`, seeded from a grid of the
/// given step.
///
/// # Safety
/// `r` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_find_points(
    r: *const CinfRing,
    lo: f64,
    hi: f64,
    step: f64,
    out: *mut *mut CinfPoints,
) -> CinfStatus {
    guard(|| {
        let ring = &handle(r)?.0;
        if !(step > 0.0 && lo <= hi) {
            return fail(CinfStatus::OutOfRange, "need lo <= hi and step > 0");
        }
        let pts = find_r_points(ring, &SearchParams::cube(ring.arity(), lo, hi, step))?;
        put(out, boxed(CinfPoints(pts)))
    })
}

/// Rank of the cotangent fibre at `point`, which must satisfy the
/// relations within `tol`.
///
/// # Safety
/// `r` is a live handle, `point` holds `len` values, `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_cotangent_rank(
    r: *const CinfRing,
    point: *const f64,
    len: usize,
    tol: f64,
    out: *mut usize,
) -> CinfStatus {
    guard(|| {
        let ring = &handle(r)?.0;
        let coords = slice(point, len)?;
        let Some(p) = is_r_point(ring, coords, tol)?.point() else {
            return fail(
                CinfStatus::NotAPoint,
                format!("{coords:?} does not satisfy the relations"),
            );
        };
        put(out, fiber_at_point(&cotangent(ring), &p)?.rank)
    })
}

/// # Safety
/// `r` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cinf_ring_free(r: *mut CinfRing) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cinf_points_count(p: *const CinfPoints) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the coordinates of point `index` into `out`, which has room for
/// `len` values; `len` must equal the arity of the ring.
///
/// # Safety
/// `p` is a live handle; `out` has room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn cinf_points_get(
    p: *const CinfPoints,
    index: usize,
    out: *mut f64,
    len: usize,
) -> CinfStatus {
    guard(|| {
        let pts = &handle(p)?.0;
        let Some(pt) = pts.get(index) else {
            return fail(
                CinfStatus::OutOfRange,
                format!("index {index} of {} points", pts.len()),
            );
        };
        let coords = pt.coords();
        if len != coords.len() {
            return fail(
                CinfStatus::Arity,
                format!("buffer of {len} for {} coordinates", coords.len()),
            );
        }
        if len > 0 {
            if out.is_null() {
                return fail(CinfStatus::NullPointer, "null output pointer");
            }
            ptr::copy_nonoverlapping(coords.as_ptr(), out, len);
        }
        Ok(())
    })
}

/// # Safety
/// `p` is null or a live handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cinf_points_free(p: *mut CinfPoints) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses workspace text and writes its canonical form.
///
/// # Safety
/// `src` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cinf_workspace_echo(
    src: *const c_char,
    out: *mut *mut c_char,
) -> CinfStatus {
    guard(|| {
        let ws = Workspace::parse(text(src)?)
            .map_err(|e| Failure(CinfStatus::Workspace, e.to_string()))?;
        put_string(out, ws.echo())
    })
}
