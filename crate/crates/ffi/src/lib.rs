//! C ABI over `kvforge`.
//!
//! Objects are opaque heap handles released with the matching `*_free`
//! function. Every entry point returns a [`KvfStatus`]; on failure
//! `kvf_last_error` describes the cause until the next call on the same
//! thread. Strings handed out by the library are released with
//! `kvf_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kvforge::cohomology::version4_residual;
use kvforge::envelope::version1::{monomial, monomials, version1_residual};
use kvforge::envelope::Envelope;
use kvforge::freelie::{LieSeries, TangentPair};
use kvforge::kvsolve::{kv2_residuals, kv_residual, solve_kv_with, SolveOptions};
use kvforge::liealg::{builtin, StructLie};
use kvforge::{json, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KvfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Inconsistent = 4,
    CapOverflow = 5,
    Truncation = 6,
    NotInvariant = 7,
    NotRepresentation = 8,
    Internal = 99,
}

/// A Lie algebra given by structure constants.
pub struct KvfAlgebra(StructLie);

/// A truncated Lie series in two letters `x`, `y`.
pub struct KvfSeries(LieSeries);

/// A tangent pair `(β¹, β²)`.
pub struct KvfPair(TangentPair);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KvfStatus {
    match e {
        Error::Parse(_) | Error::UnknownLetter(_) | Error::NotLie(_) => KvfStatus::Parse,
        Error::Inconsistent(_) => KvfStatus::Inconsistent,
        Error::CapOverflow { .. } => KvfStatus::CapOverflow,
        Error::Truncation { .. } => KvfStatus::Truncation,
        Error::NotInvariant(_) => KvfStatus::NotInvariant,
        Error::NotRepresentation(_) => KvfStatus::NotRepresentation,
        _ => KvfStatus::InvalidArgument,
    }
}

enum Fail {
    Null,
    Arg(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KvfStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KvfStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            KvfStatus::NullPointer
        }
        Ok(Err(Fail::Arg(m))) => {
            set_error(&m);
            KvfStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            KvfStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Arg("string is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    *out = CString::new(s).map_err(|_| Fail::Arg("interior NUL".into()))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kvf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn kvf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn kvf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builtin algebra by name: `heisenberg3`, `solvable2`, `sl2`, `abelianN`.
///
/// # Safety
/// `name` is a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn kvf_algebra_builtin(name: *const c_char, out: *mut *mut KvfAlgebra) -> KvfStatus {
    guard(|| {
        let g = builtin(read_str(name)?)?;
        put(out, KvfAlgebra(g))
    })
}

/// Algebra from its JSON structure constants.
///
/// # Safety
/// As for [`kvf_algebra_builtin`].
#[no_mangle]
pub unsafe extern "C" fn kvf_algebra_from_json(text: *const c_char, out: *mut *mut KvfAlgebra) -> KvfStatus {
    guard(|| {
        let j = serde_json::from_str(read_str(text)?).map_err(|e| Error::Parse(e.to_string()))?;
        put(out, KvfAlgebra(StructLie::from_json(&j)?))
    })
}

/// # Safety
/// `g` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_algebra_dim(g: *const KvfAlgebra, out: *mut usize) -> KvfStatus {
    guard(|| {
        let g = deref(g)?;
        *out.as_mut().ok_or(Fail::Null)? = g.0.dim();
        Ok(())
    })
}

/// # Safety
/// `g` comes from this library or is null.
#[no_mangle]
pub unsafe extern "C" fn kvf_algebra_free(g: *mut KvfAlgebra) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// The BCH series `log(e^x e^y)` through degree `degree`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_bch(degree: usize, out: *mut *mut KvfSeries) -> KvfStatus {
    guard(|| {
        if degree == 0 {
            return Err(Fail::Arg("degree must be positive".into()));
        }
        put(out, KvfSeries(kvforge::bch::dynkin_bch(degree)))
    })
}

/// Coefficient of the Lyndon word `word` (e.g. `"xxy"`) as an exact string.
///
/// # Safety
/// `s` is a live handle, `word` a C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_series_coeff(s: *const KvfSeries, word: *const c_char, out: *mut *mut c_char) -> KvfStatus {
    guard(|| {
        let s = deref(s)?;
        put_string(out, s.0.coeff_of(read_str(word)?).to_string())
    })
}

/// # Safety
/// `s` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_series_to_json(s: *const KvfSeries, out: *mut *mut c_char) -> KvfStatus {
    guard(|| {
        let s = deref(s)?;
        put_string(out, json::to_string_pretty(&json::series_to_json(&s.0)))
    })
}

/// # Safety
/// `text` is a C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_series_from_json(text: *const c_char, out: *mut *mut KvfSeries) -> KvfStatus {
    guard(|| {
        let j = serde_json::from_str(read_str(text)?).map_err(|e| Error::Parse(e.to_string()))?;
        put(out, KvfSeries(json::series_from_json(&j)?))
    })
}

/// # Safety
/// `s` comes from this library or is null.
#[no_mangle]
pub unsafe extern "C" fn kvf_series_free(s: *mut KvfSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Solves the KV equations in degrees `1..=degree`; `symmetrize` nonzero
/// applies the symmetrization.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_solve_kv(degree: usize, symmetrize: i32, out: *mut *mut KvfPair) -> KvfStatus {
    guard(|| {
        if degree == 0 {
            return Err(Fail::Arg("degree must be positive".into()));
        }
        let options = SolveOptions {
            symmetrize: symmetrize != 0,
            ..Default::default()
        };
        put(out, KvfPair(solve_kv_with(degree + 1, options)?.beta))
    })
}

/// Component `which` (1 or 2) of the pair as a new series handle.
///
/// # Safety
/// `p` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_pair_component(p: *const KvfPair, which: i32, out: *mut *mut KvfSeries) -> KvfStatus {
    guard(|| {
        let p = deref(p)?;
        let l = match which {
            1 => p.0.beta1.clone(),
            2 => p.0.beta2.clone(),
            _ => return Err(Fail::Arg(format!("component {which} is not 1 or 2"))),
        };
        put(out, KvfSeries(l))
    })
}

/// # Safety
/// `p` is a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_pair_to_json(p: *const KvfPair, out: *mut *mut c_char) -> KvfStatus {
    guard(|| {
        let p = deref(p)?;
        put_string(out, json::to_string_pretty(&json::pair_to_json(&p.0, None)))
    })
}

/// # Safety
/// `text` is a C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_pair_from_json(text: *const c_char, out: *mut *mut KvfPair) -> KvfStatus {
    guard(|| put(out, KvfPair(json::read_pair(read_str(text)?)?)))
}

/// # Safety
/// `p` comes from this library or is null.
#[no_mangle]
pub unsafe extern "C" fn kvf_pair_free(p: *mut KvfPair) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Checks version `version` (1-4) of the KV equations. Versions 1 and 4
/// need an algebra and use `cap` as the test degree; `g` may be null for
/// versions 2 and 3. Writes 1 to `is_zero` when the residual vanishes.
///
/// # Safety
/// `p` is a live handle, `g` a live handle or null, `is_zero` writable.
#[no_mangle]
pub unsafe extern "C" fn kvf_pair_verify(
    p: *const KvfPair,
    version: u32,
    g: *const KvfAlgebra,
    cap: usize,
    is_zero: *mut i32,
) -> KvfStatus {
    guard(|| {
        let p = deref(p)?;
        let zero = match version {
            1 => {
                let env = Envelope::new(deref(g)?.0.clone());
                let mut zero = true;
                for alpha in monomials(2 * env.dim(), cap) {
                    zero &= version1_residual(&env, &p.0, &monomial(&alpha, cap.max(1)))?.is_zero();
                }
                zero
            }
            2 => {
                let (a, b) = kv2_residuals(&p.0)?;
                a.is_zero() && b.is_zero()
            }
            3 => kv_residual(&p.0)?.is_zero(),
            4 => version4_residual(&Envelope::new(deref(g)?.0.clone()), &p.0, cap)?.is_zero(),
            v => return Err(Fail::Arg(format!("unknown version {v}"))),
        };
        *is_zero.as_mut().ok_or(Fail::Null)? = i32::from(zero);
        Ok(())
    })
}
