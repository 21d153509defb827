//! C ABI over `qwalk`.
//!
//! Every fallible function returns a `QwStatus` code and writes results
//! through out-pointers. On failure `qw_last_error_message` describes the
//! error for the calling thread. Handles are opaque and released with the
//! matching `_free` function; passing NULL to a `_free` is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qwalk::kreweras;
use qwalk::model::{Model, Weight};
use qwalk::oracle::CountTable;
use qwalk::rat::{self, Ratio};
use qwalk::series::SeriesConfig;
use qwalk::stepset::{GroupOrder, ModelKind};
use qwalk::{Complex64, Error, StepSet};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwStatus {
    Ok = 0,
    NullPointer = 1,
    /// bad step set, weight, ratio or other argument
    InvalidInput = 2,
    /// quadrature, series or rationality failure
    Numeric = 3,
    /// z is not in H at the requested resolution
    NotRational = 4,
    /// a panic was caught at the boundary
    Internal = 5,
}

/// Model classes reported by `qw_classify`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QwModelKind {
    Trivial = 0,
    HalfPlaneReducible = 1,
    Singular = 2,
    NonSingular = 3,
}

/// Opaque step set.
pub struct QwStepSet(StepSet);

/// Opaque model at a weight in H.
pub struct QwModel(Model);

/// Opaque table of exact counts.
pub struct QwCountTable(CountTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> QwStatus {
    let code = match e {
        Error::NotRational { .. } => QwStatus::NotRational,
        ref e if e.is_input_error() => QwStatus::InvalidInput,
        Error::NotNonSingular(_) => QwStatus::InvalidInput,
        _ => QwStatus::Numeric,
    };
    set_error(e.to_string());
    code
}

/// Runs `f`, converting panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), QwStatus>) -> QwStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            QwStatus::Internal
        }
    }
}

fn null() -> QwStatus {
    set_error("null pointer argument".into());
    QwStatus::NullPointer
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, QwStatus> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        QwStatus::InvalidInput
    })
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), QwStatus> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, QwStatus> {
    p.as_ref().ok_or_else(null)
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn qw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a comma-separated list of compass steps, e.g. `"NE,W,S"`.
///
/// # Safety
/// `steps` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qw_stepset_parse(steps: *const c_char, out: *mut *mut QwStepSet) -> QwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let s = StepSet::parse(text(steps)?).map_err(fail)?;
        put(out, Box::into_raw(Box::new(QwStepSet(s))))
    })
}

/// # Safety
/// `s` must come from `qw_stepset_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qw_stepset_free(s: *mut QwStepSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Class of the model and order of its group: `n` when finite, `-1` when
/// it exceeds the search bound, `0` when the group is not defined.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_classify(
    s: *const QwStepSet,
    out_kind: *mut QwModelKind,
    out_group_order: *mut i32,
) -> QwStatus {
    guard(|| {
        let c = handle(s)?.0.classify().map_err(fail)?;
        let kind = match c.kind {
            ModelKind::Trivial => QwModelKind::Trivial,
            ModelKind::HalfPlaneReducible => QwModelKind::HalfPlaneReducible,
            ModelKind::Singular => QwModelKind::Singular,
            ModelKind::NonSingular => QwModelKind::NonSingular,
        };
        let order = match c.group_order {
            GroupOrder::Finite(n) => n as i32,
            GroupOrder::ExceedsBound => -1,
            GroupOrder::Undefined => 0,
        };
        put(out_kind, kind)?;
        put(out_group_order, order)
    })
}

/// Exact counts up to length `depth`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_count_table_new(
    s: *const QwStepSet,
    depth: usize,
    out: *mut *mut QwCountTable,
) -> QwStatus {
    guard(|| {
        let s = handle(s)?;
        if out.is_null() {
            return Err(null());
        }
        if depth > 10_000 {
            set_error(format!("depth {depth} too large"));
            return Err(QwStatus::InvalidInput);
        }
        put(out, Box::into_raw(Box::new(QwCountTable(CountTable::new(&s.0, depth)))))
    })
}

/// Number of walks of length `n` ending at `(i, j)`, as a double.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_count_table_get(
    t: *const QwCountTable,
    i: usize,
    j: usize,
    n: usize,
    out: *mut f64,
) -> QwStatus {
    guard(|| {
        let t = &handle(t)?.0;
        if n > t.depth() {
            set_error(format!("length {n} beyond table depth {}", t.depth()));
            return Err(QwStatus::InvalidInput);
        }
        let v = t.q(i, j, n).to_string().parse::<f64>().unwrap_or(f64::INFINITY);
        put(out, v)
    })
}

/// # Safety
/// `t` must come from `qw_count_table_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qw_count_table_free(t: *mut QwCountTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Model at weight `z`; fails with `NotRational` unless `w3/w2` is within
/// `tol` of some `k/l` with `l <= lmax`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_model_new(
    s: *const QwStepSet,
    z: f64,
    lmax: u32,
    tol: f64,
    out: *mut *mut QwModel,
) -> QwStatus {
    guard(|| {
        let s = handle(s)?;
        if out.is_null() {
            return Err(null());
        }
        qwalk::oracle::check_weight(&s.0, z).map_err(fail)?;
        let m = Model::new(&s.0, Weight::Fixed(z), lmax, tol, SeriesConfig::default()).map_err(fail)?;
        put(out, Box::into_raw(Box::new(QwModel(m))))
    })
}

/// Model at the weight where `w3/w2 = k/l`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_model_new_pinned(
    s: *const QwStepSet,
    k: u32,
    l: u32,
    out: *mut *mut QwModel,
) -> QwStatus {
    guard(|| {
        let s = handle(s)?;
        if out.is_null() {
            return Err(null());
        }
        let r = Ratio::new(k, l).map_err(fail)?;
        let m = Model::new(&s.0, Weight::Pinned(r), l.max(rat::DEFAULT_LMAX), rat::DEFAULT_TOL, SeriesConfig::default())
            .map_err(fail)?;
        put(out, Box::into_raw(Box::new(QwModel(m))))
    })
}

/// # Safety
/// `m` must come from a `qw_model_new*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qw_model_free(m: *mut QwModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Weight and detected rotation number `k/l`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_model_weight(m: *const QwModel, z: *mut f64, k: *mut u32, l: *mut u32) -> QwStatus {
    guard(|| {
        let m = &handle(m)?.0;
        put(z, m.z())?;
        put(k, m.ratio.k)?;
        put(l, m.ratio.l)
    })
}

/// Periods: `w1 = i * w1_im`, real `w2`, and the shift `w3`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_model_periods(m: *const QwModel, w1_im: *mut f64, w2: *mut f64, w3: *mut f64) -> QwStatus {
    guard(|| {
        let m = &handle(m)?.0;
        put(w1_im, m.u.w1().im)?;
        put(w2, m.u.w2())?;
        put(w3, m.u.w3())
    })
}

/// `Q(0,0;z)` from the principal-part series.
///
/// # Safety
/// Pointers must be valid; `est_tail` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn qw_model_q00(m: *const QwModel, value: *mut f64, est_tail: *mut f64) -> QwStatus {
    guard(|| {
        let r = handle(m)?.0.q00().map_err(fail)?;
        if !est_tail.is_null() {
            *est_tail = r.est_tail;
        }
        put(value, r.value.re)
    })
}

/// The branch `branch` of `Q(x,0;z)`; branch 1 is the power series.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_model_evaluate_qx0(
    m: *const QwModel,
    x_re: f64,
    x_im: f64,
    branch: i64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QwStatus {
    guard(|| {
        let r = handle(m)?.0.q_x0(Complex64::new(x_re, x_im), branch).map_err(fail)?;
        put(out_re, r.value.re)?;
        put(out_im, r.value.im)
    })
}

/// Kreweras excursions `(W - W^4/4) / (2z)` with `W = z (2 + W^3)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qw_kreweras_q00_closed(z: f64, out: *mut f64) -> QwStatus {
    guard(|| put(out, kreweras::q00_closed(z).map_err(fail)?))
}
