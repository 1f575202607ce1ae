//! C ABI for `gapscope`.
//!
//! Objects cross the boundary as opaque handles created by `gs_*_new` and
//! released by the matching `gs_*_free`. Every fallible call returns a
//! [`GsStatus`]; on failure the message is available from
//! [`gs_last_error`] on the same thread. Strings returned through `out`
//! parameters are owned by the caller and released with [`gs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gapscope::distribution::{avg_gap_rotation_exact, limit_g};
use gapscope::gaps::{gap_report, three_gap_predict, GapReport};
use gapscope::iet::{Iet, IetSpec, Permutation};
use gapscope::numerics::{dilog, farey_neighbors, FareyLocation, RealValue};
use gapscope::zipper::zipper_torus;
use gapscope::Error;

/// Bumped on every incompatible change of the functions below.
pub const GS_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    Domain = 1,
    Ambiguous = 2,
    Parse = 3,
    Validation = 4,
    Consistency = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// An interval exchange transformation.
pub struct GsIet {
    inner: Iet,
}

/// Gaps and clusters of an orbit segment.
pub struct GsGapReport {
    inner: GapReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> GsStatus {
    let status = match e {
        Error::Domain(_) | Error::NoInverse { .. } => GsStatus::Domain,
        Error::Ambiguous { .. } => GsStatus::Ambiguous,
        Error::Parse { .. } => GsStatus::Parse,
        Error::Validation(_) => GsStatus::Validation,
        Error::Consistency(_) => GsStatus::Consistency,
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> GsStatus {
    set_error(format!("{what} is null"));
    GsStatus::NullPointer
}

fn guard(f: impl FnOnce() -> GsStatus) -> GsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("panic inside gapscope".into());
        GsStatus::Panic
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, GsStatus> {
    if p.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        GsStatus::InvalidUtf8
    })
}

unsafe fn put<T>(out: *mut T, v: T) -> GsStatus {
    if out.is_null() {
        return null("output pointer");
    }
    *out = v;
    GsStatus::Ok
}

fn json_string<T: serde::Serialize>(v: &T) -> *mut c_char {
    let s = serde_json::to_string(v).expect("library values serialize");
    CString::new(s).expect("JSON has no nul").into_raw()
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

macro_rules! arg {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

#[no_mangle]
pub extern "C" fn gs_abi_version() -> u32 {
    GS_ABI_VERSION
}

/// The message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn gs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an IET from `d` lengths and the 1-based images `pi(1) .. pi(d)`.
///
/// # Safety
/// `lengths` and `images` must point to `d` readable values.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_new(
    lengths: *const f64,
    images: *const u32,
    d: usize,
    out: *mut *mut GsIet,
) -> GsStatus {
    guard(|| {
        if lengths.is_null() || images.is_null() {
            return null("lengths or images");
        }
        let lambda = std::slice::from_raw_parts(lengths, d).to_vec();
        let imgs = std::slice::from_raw_parts(images, d)
            .iter()
            .map(|&i| i as usize)
            .collect();
        let pi = tri!(Permutation::from_images(imgs));
        let t = tri!(Iet::new(lambda, pi));
        put(out, Box::into_raw(Box::new(GsIet { inner: t })))
    })
}

/// Builds an IET from its JSON description, lengths may be surds.
///
/// # Safety
/// `json` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_from_json(json: *const c_char, out: *mut *mut GsIet) -> GsStatus {
    guard(|| {
        let s = arg!(text(json));
        let t = tri!(IetSpec::from_json(s).and_then(|spec| spec.to_iet()));
        put(out, Box::into_raw(Box::new(GsIet { inner: t })))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_rotation_new(theta: f64, out: *mut *mut GsIet) -> GsStatus {
    guard(|| {
        let t = tri!(Iet::rotation(theta));
        put(out, Box::into_raw(Box::new(GsIet { inner: t })))
    })
}

/// # Safety
/// `t` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_free(t: *mut GsIet) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of intervals, 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_d(t: *const GsIet) -> usize {
    t.as_ref().map_or(0, |t| t.inner.d())
}

/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_apply(t: *const GsIet, x: f64, out: *mut f64) -> GsStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return null("iet");
        };
        put(out, tri!(t.inner.apply(x)))
    })
}

/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_iet_inverse(t: *const GsIet, out: *mut *mut GsIet) -> GsStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return null("iet");
        };
        put(
            out,
            Box::into_raw(Box::new(GsIet {
                inner: t.inner.inverse(),
            })),
        )
    })
}

/// # Safety
/// `t` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report(
    t: *const GsIet,
    n: usize,
    eps: f64,
    out: *mut *mut GsGapReport,
) -> GsStatus {
    guard(|| {
        let Some(t) = t.as_ref() else {
            return null("iet");
        };
        let r = tri!(gap_report(&t.inner, n, eps, false));
        put(out, Box::into_raw(Box::new(GsGapReport { inner: r })))
    })
}

/// # Safety
/// `r` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_free(r: *mut GsGapReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of distinct gap lengths, 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_num_clusters(r: *const GsGapReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.clusters.len())
}

/// The `k`-th distinct length (increasing) and its multiplicity.
///
/// # Safety
/// `r` must be a live handle, `length` and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_cluster(
    r: *const GsGapReport,
    k: usize,
    length: *mut f64,
    count: *mut usize,
) -> GsStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return null("report");
        };
        let Some(c) = r.inner.clusters.get(k) else {
            return fail(Error::Domain(format!("cluster {k} out of range")));
        };
        if length.is_null() || count.is_null() {
            return null("output pointer");
        }
        *length = c.length;
        *count = c.count;
        GsStatus::Ok
    })
}

/// Number of gaps (distinct orbit points), 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_num_gaps(r: *const GsGapReport) -> usize {
    r.as_ref().map_or(0, |r| r.inner.gaps.len())
}

/// Copies up to `cap` gaps into `buf`; writes the number copied to `len`.
///
/// # Safety
/// `buf` must have room for `cap` values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_gaps(
    r: *const GsGapReport,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> GsStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return null("report");
        };
        if buf.is_null() && cap > 0 {
            return null("buffer");
        }
        let m = cap.min(r.inner.gaps.len());
        ptr::copy_nonoverlapping(r.inner.gaps.as_ptr(), buf, m);
        put(len, m)
    })
}

/// The whole report as JSON.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_gap_report_json(
    r: *const GsGapReport,
    out: *mut *mut c_char,
) -> GsStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return null("report");
        };
        put(out, json_string(&r.inner))
    })
}

/// The three-gap prediction for the surd `alpha` at level `n`, as JSON.
///
/// # Safety
/// `alpha` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_three_gap_predict(
    alpha: *const c_char,
    n: u64,
    out: *mut *mut c_char,
) -> GsStatus {
    guard(|| {
        let x = tri!(RealValue::parse(arg!(text(alpha))));
        let p = tri!(three_gap_predict(&x, n));
        put(out, json_string(&p))
    })
}

/// Consecutive Farey fractions `a1/q1 <= alpha <= a2/q2` of order `n`; both
/// sides are equal when `alpha` is itself a fraction of order `n`.
///
/// # Safety
/// `alpha` must be a nul-terminated string; the four outputs writable.
#[no_mangle]
pub unsafe extern "C" fn gs_farey_neighbors(
    alpha: *const c_char,
    n: u64,
    a1: *mut u64,
    q1: *mut u64,
    a2: *mut u64,
    q2: *mut u64,
) -> GsStatus {
    guard(|| {
        let x = tri!(RealValue::parse(arg!(text(alpha))));
        let (l, r) = match tri!(farey_neighbors(&x, n)) {
            FareyLocation::Exact { fraction } => (fraction, fraction),
            FareyLocation::Between { left, right } => (left, right),
        };
        if a1.is_null() || q1.is_null() || a2.is_null() || q2.is_null() {
            return null("output pointer");
        }
        (*a1, *q1, *a2, *q2) = (l.a, l.q, r.a, r.q);
        GsStatus::Ok
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_dilog(x: f64, out: *mut f64) -> GsStatus {
    guard(|| put(out, tri!(dilog(x))))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_limit_g(z: f64, out: *mut f64) -> GsStatus {
    guard(|| put(out, tri!(limit_g(z)).value))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_avg_gap_rotation_exact(
    a: f64,
    b: f64,
    z: f64,
    n: u64,
    out: *mut f64,
) -> GsStatus {
    guard(|| put(out, tri!(avg_gap_rotation_exact(a, b, z, n))))
}

/// Writes up to three widths and heights and their number to `len`.
///
/// # Safety
/// `alpha` must be a nul-terminated string; `widths` and `heights` must
/// have room for 3 values; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn gs_zipper_torus(
    alpha: *const c_char,
    n: u64,
    widths: *mut f64,
    heights: *mut f64,
    len: *mut usize,
) -> GsStatus {
    guard(|| {
        let x = tri!(RealValue::parse(arg!(text(alpha))));
        let z = tri!(zipper_torus(&x, n));
        if widths.is_null() || heights.is_null() {
            return null("output buffer");
        }
        let m = z.widths.len().min(3);
        ptr::copy_nonoverlapping(z.widths.as_ptr(), widths, m);
        ptr::copy_nonoverlapping(z.heights.as_ptr(), heights, m);
        put(len, m)
    })
}
