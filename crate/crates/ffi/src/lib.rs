//! C ABI for `hypernorm`.
//!
//! Pairs and functions are opaque heap handles (`HnPair`, `HnFunction`)
//! created by `hn_*_new`/`hn_*_from_json`/`hn_make_*` and released with the
//! matching `*_free`. Every fallible call returns an `HnStatus`; on failure
//! `hn_last_error` gives a message for the calling thread, valid until the
//! next call on that thread. Strings returned through `char **` belong to
//! the caller and are released with `hn_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hypernorm::analysis::{classify, Verdict};
use hypernorm::catalog;
use hypernorm::engine::{self, DiscreteMeasureSpace, EngineConfig, GridFunction};
use hypernorm::pair::{HypergraphPair, PairJson, PairLimits};
use hypernorm::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Json = 3,
    Budget = 4,
    DimensionMismatch = 5,
    NegativeWeight = 6,
    ZeroSize = 7,
    Rejected = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnVerdict {
    TypeOne = 0,
    TypeTwo = 1,
    NotSemiNorming = 2,
}

/// Opaque pair handle.
pub struct HnPair(HypergraphPair);

/// Opaque function handle.
pub struct HnFunction(GridFunction);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HnStatus {
    match e {
        Error::OutOfRange { .. } | Error::InvalidArgument(_) => HnStatus::InvalidArgument,
        Error::DimensionMismatch(_) => HnStatus::DimensionMismatch,
        Error::NegativeWeight { .. } => HnStatus::NegativeWeight,
        Error::ZeroSize => HnStatus::ZeroSize,
        Error::BudgetExceeded { .. } => HnStatus::Budget,
        Error::Rejected(_) => HnStatus::Rejected,
        Error::Json { .. } => HnStatus::Json,
        Error::Io(_) => HnStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            HnStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            HnStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            HnStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Lib(Error::InvalidArgument(format!("{what} is not UTF-8"))))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn give_pair(h: HypergraphPair, dst: &mut *mut HnPair) {
    *dst = Box::into_raw(Box::new(HnPair(h)));
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or "" after a success.
#[no_mangle]
pub extern "C" fn hn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn hn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_pair` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_from_json(json: *const c_char, out_pair: *mut *mut HnPair) -> HnStatus {
    guard(|| {
        let dst = out(out_pair, "out_pair")?;
        *dst = ptr::null_mut();
        let h = PairJson::parse(text(json, "json")?)?.into_pair(&PairLimits::default())?;
        give_pair(h, dst);
        Ok(())
    })
}

/// Canonical JSON of a pair; free the result with `hn_string_free`.
///
/// # Safety
/// `pair` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_to_json(pair: *const HnPair, out_json: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        let h = deref(pair, "pair")?;
        *dst = into_c_string(PairJson::from(&h.0).to_string_compact());
        Ok(())
    })
}

/// # Safety
/// `pair` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_free(pair: *mut HnPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// `|H| = sum(alpha + beta)`.
///
/// # Safety
/// `pair` must be a live handle; `out_size` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_size(pair: *const HnPair, out_size: *mut f64) -> HnStatus {
    guard(|| {
        *out(out_size, "out_size")? = deref(pair, "pair")?.0.size();
        Ok(())
    })
}

/// # Safety
/// `out_pair` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_make_lp(p: f64, out_pair: *mut *mut HnPair) -> HnStatus {
    guard(|| {
        let dst = out(out_pair, "out_pair")?;
        give_pair(catalog::make_lp(p)?, dst);
        Ok(())
    })
}

/// # Safety
/// `out_pair` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_make_gowers(k: usize, out_pair: *mut *mut HnPair) -> HnStatus {
    guard(|| {
        let dst = out(out_pair, "out_pair")?;
        give_pair(catalog::make_gowers(k)?, dst);
        Ok(())
    })
}

/// Schatten pair for the even `exponent` 2m.
///
/// # Safety
/// `out_pair` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_make_schatten(exponent: usize, out_pair: *mut *mut HnPair) -> HnStatus {
    guard(|| {
        let dst = out(out_pair, "out_pair")?;
        give_pair(catalog::make_schatten(exponent)?, dst);
        Ok(())
    })
}

/// # Safety
/// `dims` must point to `k` values; `out_pair` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_make_complete(p: f64, dims: *const usize, k: usize, out_pair: *mut *mut HnPair) -> HnStatus {
    guard(|| {
        let dst = out(out_pair, "out_pair")?;
        let dims = slice(dims, k, "dims")?;
        give_pair(catalog::make_complete(p, dims)?, dst);
        Ok(())
    })
}

/// Verdict of the semi-norming screen; `out_s` receives the Type I
/// parameter (NaN otherwise). Either output may be null.
///
/// # Safety
/// `pair` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_classify(pair: *const HnPair, out_verdict: *mut HnVerdict, out_s: *mut f64) -> HnStatus {
    guard(|| {
        let r = classify(&deref(pair, "pair")?.0)?;
        let (v, s) = match r.verdict {
            Verdict::TypeI { s } => (HnVerdict::TypeOne, s),
            Verdict::TypeII => (HnVerdict::TypeTwo, f64::NAN),
            Verdict::NotSemiNorming => (HnVerdict::NotSemiNorming, f64::NAN),
        };
        if let Some(dst) = out_verdict.as_mut() {
            *dst = v;
        }
        if let Some(dst) = out_s.as_mut() {
            *dst = s;
        }
        Ok(())
    })
}

/// Full classification report as JSON; free with `hn_string_free`.
///
/// # Safety
/// `pair` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_pair_classify_json(pair: *const HnPair, out_json: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let dst = out(out_json, "out_json")?;
        let r = classify(&deref(pair, "pair")?.0)?;
        *dst = into_c_string(serde_json::to_string(&r).map_err(Error::from)?);
        Ok(())
    })
}

/// Function on `n` points with the given weights (null = counting
/// measure). `re` and `im` hold `n^k` values in row-major order; `im` may
/// be null for a real function.
///
/// # Safety
/// Pointers must reference arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hn_function_new(
    n: usize,
    k: usize,
    weights: *const f64,
    re: *const f64,
    im: *const f64,
    out_function: *mut *mut HnFunction,
) -> HnStatus {
    guard(|| {
        let dst = out(out_function, "out_function")?;
        *dst = ptr::null_mut();
        let space = if weights.is_null() {
            DiscreteMeasureSpace::counting(n)?
        } else {
            DiscreteMeasureSpace::new(slice(weights, n, "weights")?.to_vec())?
        };
        let len = u32::try_from(k)
            .ok()
            .and_then(|k| n.checked_pow(k))
            .ok_or_else(|| Error::InvalidArgument(format!("n^k overflows for n = {n}, k = {k}")))?;
        let re = slice(re, len, "re")?;
        let values = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = slice(im, len, "im")?;
            re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()
        };
        *dst = Box::into_raw(Box::new(HnFunction(GridFunction::new(space, k, values)?)));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out_function` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_function_from_json(json: *const c_char, out_function: *mut *mut HnFunction) -> HnStatus {
    guard(|| {
        let dst = out(out_function, "out_function")?;
        *dst = ptr::null_mut();
        let f = GridFunction::from_json(text(json, "json")?)?;
        *dst = Box::into_raw(Box::new(HnFunction(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn hn_function_free(f: *mut HnFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// `integral f^H` by the planned contraction. Budgets follow
/// `HYPERNORM_BUDGET`.
///
/// # Safety
/// Handles must be live; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_integrate(pair: *const HnPair, f: *const HnFunction, out_re: *mut f64, out_im: *mut f64) -> HnStatus {
    guard(|| {
        let re = out(out_re, "out_re")?;
        let im = out(out_im, "out_im")?;
        let z = engine::integrate_with(&deref(pair, "pair")?.0, &deref(f, "f")?.0, &EngineConfig::from_env())?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// `|integral f^H|^{1/|H|}`.
///
/// # Safety
/// Handles must be live; `out_norm` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hn_norm(pair: *const HnPair, f: *const HnFunction, out_norm: *mut f64) -> HnStatus {
    guard(|| {
        let dst = out(out_norm, "out_norm")?;
        *dst = engine::norm_with(&deref(pair, "pair")?.0, &deref(f, "f")?.0, &EngineConfig::from_env())?.value;
        Ok(())
    })
}
