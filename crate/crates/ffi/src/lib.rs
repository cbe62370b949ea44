//! C ABI over the gpoly library.
//!
//! Every fallible function returns a [`GpolyStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and can
//! be read with [`gpoly_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gpoly::geometry::{estranged_pair_count, facet_set, kfacet_profile, subset_count_within};
use gpoly::sampling::{gaussian_point_set, stream, PointSet, Provenance};
use gpoly::theory::{estranged_constant, growth_base_kfacet, kfacet_expectation_exact, KFacetFormulaInputs, Sign};
use gpoly::Error;

/// Largest C(n, d) a profile or facet query will enumerate.
pub const GPOLY_MAX_SUBSETS: u64 = 200_000;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpolyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DimensionMismatch = 3,
    Domain = 4,
    Degenerate = 5,
    Numerical = 6,
    ResourceCap = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpolySign {
    Minus = 0,
    Plus = 1,
}

impl From<GpolySign> for Sign {
    fn from(s: GpolySign) -> Self {
        match s {
            GpolySign::Minus => Sign::Minus,
            GpolySign::Plus => Sign::Plus,
        }
    }
}

/// Opaque handle to a point set.
pub struct GpolyPointSet(PointSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GpolyStatus {
    match e {
        Error::DimensionMismatch(_) => GpolyStatus::DimensionMismatch,
        Error::Domain(_) => GpolyStatus::Domain,
        Error::Degenerate { .. } => GpolyStatus::Degenerate,
        Error::SingularMatrix { .. } | Error::QuadratureNotConverged { .. } => GpolyStatus::Numerical,
        Error::ResourceCap(_) => GpolyStatus::ResourceCap,
        Error::Trial { source, .. } => status_of(source),
        Error::InvalidParameter(_) | Error::Parse(_) | Error::Io(_) => GpolyStatus::InvalidParameter,
    }
}

struct Fail(GpolyStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GpolyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GpolyStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside gpoly".into());
            GpolyStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(GpolyStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(ps: *const GpolyPointSet) -> Result<&'a PointSet, Fail> {
    ps.as_ref().map(|h| &h.0).ok_or_else(|| null("point set"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn capped(ps: &PointSet) -> Result<(), Fail> {
    subset_count_within(ps.n(), ps.d(), GPOLY_MAX_SUBSETS)?;
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next gpoly call on the same thread.
#[no_mangle]
pub extern "C" fn gpoly_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gpoly_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Sample `n` standard Gaussian points in dimension `d` from stream (seed, 0).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gpoly_point_set_gaussian(
    seed: u64,
    n: usize,
    d: usize,
    out: *mut *mut GpolyPointSet,
) -> GpolyStatus {
    guard(|| {
        let ps = gaussian_point_set(&mut stream(seed, 0), n, d)?;
        write(out, Box::into_raw(Box::new(GpolyPointSet(ps))))
    })
}

/// Copy `n * d` row-major coordinates into a new point set.
///
/// # Safety
/// `coords` must point to `n * d` readable doubles and `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn gpoly_point_set_from_coords(
    coords: *const f64,
    n: usize,
    d: usize,
    out: *mut *mut GpolyPointSet,
) -> GpolyStatus {
    guard(|| {
        if coords.is_null() {
            return Err(null("coords"));
        }
        let len = n.checked_mul(d).ok_or_else(|| Fail(GpolyStatus::InvalidParameter, "n * d overflows".into()))?;
        let data = std::slice::from_raw_parts(coords, len).to_vec();
        let ps = PointSet::new(n, d, data, Provenance::External)?;
        write(out, Box::into_raw(Box::new(GpolyPointSet(ps))))
    })
}

/// Release a point set. Null is accepted.
///
/// # Safety
/// `ps` must come from a gpoly constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gpoly_point_set_free(ps: *mut GpolyPointSet) {
    if !ps.is_null() {
        drop(Box::from_raw(ps));
    }
}

/// Write the number of points and the dimension.
///
/// # Safety
/// `ps` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_point_set_shape(ps: *const GpolyPointSet, n: *mut usize, d: *mut usize) -> GpolyStatus {
    guard(|| {
        let p = handle(ps)?;
        write(n, p.n())?;
        write(d, p.d())
    })
}

/// Copy the row-major coordinates into `buf`, which must hold `n * d` doubles.
///
/// # Safety
/// `ps` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gpoly_point_set_coords(ps: *const GpolyPointSet, buf: *mut f64, len: usize) -> GpolyStatus {
    guard(|| {
        let p = handle(ps)?;
        let coords = p.coords();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < coords.len() {
            return Err(Fail(GpolyStatus::BufferTooSmall, format!("need {} doubles, got {len}", coords.len())));
        }
        ptr::copy_nonoverlapping(coords.as_ptr(), buf, coords.len());
        Ok(())
    })
}

/// Fill `e[0..=n-d]` with the k-facet counts. `len` must be at least
/// `n - d + 1`. `balanced` receives the number of subsets with equal sides.
///
/// # Safety
/// `ps` must be a live handle, `e` writable for `len` values and `balanced`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_kfacet_profile(
    ps: *const GpolyPointSet,
    e: *mut u64,
    len: usize,
    balanced: *mut u64,
) -> GpolyStatus {
    guard(|| {
        let p = handle(ps)?;
        if e.is_null() {
            return Err(null("e"));
        }
        let need = p.n().saturating_sub(p.d()) + 1;
        if len < need {
            return Err(Fail(GpolyStatus::BufferTooSmall, format!("need {need} counts, got {len}")));
        }
        capped(p)?;
        let profile = kfacet_profile(p)?;
        ptr::copy_nonoverlapping(profile.e.as_ptr(), e, profile.e.len());
        write(balanced, profile.balanced)
    })
}

/// Number of facets of the convex hull.
///
/// # Safety
/// `ps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_facet_count(ps: *const GpolyPointSet, out: *mut u64) -> GpolyStatus {
    guard(|| {
        let p = handle(ps)?;
        capped(p)?;
        write(out, facet_set(p)?.len() as u64)
    })
}

/// Number of unordered pairs of vertex-disjoint facets.
///
/// # Safety
/// `ps` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_estranged_pair_count(ps: *const GpolyPointSet, out: *mut u64) -> GpolyStatus {
    guard(|| {
        let p = handle(ps)?;
        capped(p)?;
        write(out, estranged_pair_count(&facet_set(p)?))
    })
}

/// Exact expected number of k-facets for n Gaussian points in dimension d.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_kfacet_expectation_exact(n: usize, d: usize, k: usize, out: *mut f64) -> GpolyStatus {
    guard(|| write(out, kfacet_expectation_exact(KFacetFormulaInputs::new(n, d, k)?)?))
}

/// Exponential growth base for n = alpha * d points and k = r * (n - d).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_growth_base(alpha: f64, r: f64, out: *mut f64) -> GpolyStatus {
    guard(|| write(out, growth_base_kfacet(alpha, r)?))
}

/// Maximised estranged-pair constant for the given sign pattern.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpoly_estranged_constant(s1: GpolySign, s2: GpolySign, out: *mut f64) -> GpolyStatus {
    guard(|| write(out, estranged_constant(s1.into(), s2.into())?.value))
}
