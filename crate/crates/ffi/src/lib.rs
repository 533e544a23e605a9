//! C interface to the `bergman` library.
//!
//! Every fallible function returns a [`BergmanStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`bergman_last_error_message`] until the next call on the same thread.
//! Strings returned by the library must be released with [`bergman_string_free`],
//! handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use bergman::balancing::verify_fan;
use bergman::fan::DEFAULT_MAX_FLATS;
use bergman::io::{self, WeightFile};
use bergman::render::render_lattice;
use bergman::weighted::{certified_weights, check_weighted, skeleton, solve_weights};
use bergman::{Error, Matroid, RationalVector};
use serde_json::{json, Value};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BergmanStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidMatroid = 4,
    SizeLimit = 5,
    InvalidArgument = 6,
    /// The point lies outside the Bergman fan.
    NotInFan = 7,
    Panic = 8,
}

/// Opaque matroid handle.
pub struct BergmanMatroid {
    matroid: Matroid,
    source: Value,
}

/// Opaque fan handle. Owns a copy of its matroid.
pub struct BergmanFan {
    fan: bergman::BergmanFan,
    source: Value,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(BergmanStatus, String);

impl Failure {
    fn new(status: BergmanStatus, msg: impl Into<String>) -> Self {
        Failure(status, msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => BergmanStatus::ParseError,
            Error::SizeLimit { .. } => BergmanStatus::SizeLimit,
            Error::HasLoops => BergmanStatus::InvalidMatroid,
            _ => BergmanStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn matroid_error(e: Error) -> Failure {
    match e {
        Error::Parse(_) => e.into(),
        e => Failure(BergmanStatus::InvalidMatroid, e.to_string()),
    }
}

fn guard(f: impl FnOnce() -> Result<BergmanStatus, Failure>) -> BergmanStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == BergmanStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BergmanStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(BergmanStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(BergmanStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(BergmanStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<BergmanStatus, Failure> {
    if out.is_null() {
        return Err(Failure::new(BergmanStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(BergmanStatus::Ok)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Message describing the last failure on this thread, or "" after success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn bergman_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bergman_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a matroid document (`bases`, `uniform` or `graphic` kind).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_from_json(
    json: *const c_char,
    out: *mut *mut BergmanMatroid,
) -> BergmanStatus {
    guard(|| {
        let text = str_arg(json)?;
        let doc = io::parse_matroid(text).map_err(matroid_error)?;
        let h = Box::new(BergmanMatroid { matroid: doc.matroid, source: doc.source });
        write_out(out, Box::into_raw(h))
    })
}

/// The uniform matroid U_{r,n} on elements labelled 0..n-1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_uniform(r: i64, n: i64, out: *mut *mut BergmanMatroid) -> BergmanStatus {
    guard(|| {
        let matroid = Matroid::uniform(r, n).map_err(matroid_error)?;
        let source = json!({ "kind": "uniform", "r": r, "n": n });
        write_out(out, Box::into_raw(Box::new(BergmanMatroid { matroid, source })))
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_free(m: *mut BergmanMatroid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_rank(m: *const BergmanMatroid, out: *mut usize) -> BergmanStatus {
    guard(|| write_out(out, handle(m)?.matroid.rank()))
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_num_flats(m: *const BergmanMatroid, out: *mut usize) -> BergmanStatus {
    guard(|| write_out(out, handle(m)?.matroid.flats().len()))
}

/// Rank-by-rank listing of the lattice of flats with its cover edges.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_matroid_lattice_text(
    m: *const BergmanMatroid,
    out: *mut *mut c_char,
) -> BergmanStatus {
    guard(|| write_out(out, into_c_string(render_lattice(&handle(m)?.matroid))))
}

/// Builds the Bergman fan. `max_flats == 0` selects the default limit.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_fan_build(
    m: *const BergmanMatroid,
    max_flats: usize,
    out: *mut *mut BergmanFan,
) -> BergmanStatus {
    guard(|| {
        let m = handle(m)?;
        let limit = if max_flats == 0 { DEFAULT_MAX_FLATS } else { max_flats };
        let fan = bergman::BergmanFan::build_with_limit(&m.matroid, limit)?;
        let h = Box::new(BergmanFan { fan, source: m.source.clone() });
        write_out(out, Box::into_raw(h))
    })
}

/// # Safety
/// `f` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bergman_fan_free(f: *mut BergmanFan) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_fan_num_cones(f: *const BergmanFan, out: *mut usize) -> BergmanStatus {
    guard(|| write_out(out, handle(f)?.fan.num_cones()))
}

/// The fan export document.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_fan_to_json(f: *const BergmanFan, out: *mut *mut c_char) -> BergmanStatus {
    guard(|| {
        let f = handle(f)?;
        write_out(out, into_c_string(pretty(&io::fan_json(&f.fan, &f.source))))
    })
}

/// Classifies a comma-separated rational point. On success writes a JSON
/// object with the flag and type; returns `NOT_IN_FAN` and writes nothing
/// when the point lies outside the fan.
///
/// # Safety
/// `f` must be a live handle, `point` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_fan_classify_point(
    f: *const BergmanFan,
    point: *const c_char,
    out: *mut *mut c_char,
) -> BergmanStatus {
    guard(|| {
        let f = handle(f)?;
        let x = RationalVector::parse(str_arg(point)?)?;
        if out.is_null() {
            return Err(Failure::new(BergmanStatus::NullPointer, "null output pointer"));
        }
        match f.fan.classify_point(&x)? {
            Some(flag) => {
                let v = json!({
                    "point": io::vector_json(&x),
                    "flag": io::flag_json(f.fan.matroid(), &flag),
                    "type": flag.cone_type().ranks(),
                });
                write_out(out, into_c_string(pretty(&v)))
            }
            None => {
                set_error(&format!("point {x} is not in the Bergman fan"));
                Ok(BergmanStatus::NotInFan)
            }
        }
    })
}

/// Checks every (i,k)-balancing relation at every cone. Either count
/// pointer may be null.
///
/// # Safety
/// `f` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_verify_balancing(
    f: *const BergmanFan,
    relations_checked: *mut usize,
    violations: *mut usize,
) -> BergmanStatus {
    guard(|| {
        let report = verify_fan(&handle(f)?.fan)?;
        if !relations_checked.is_null() {
            relations_checked.write(report.relations_checked);
        }
        if !violations.is_null() {
            violations.write(report.violations.len() + report.codim1_failures.len());
        }
        Ok(BergmanStatus::Ok)
    })
}

/// Solver output `{ "dim": d, "basis": [...] }` for balanced weights on the
/// k-skeleton. With `certified`, only weights whose boundary relations are
/// combinations of (i,k) relations.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_weights_solve_json(
    f: *const BergmanFan,
    k: usize,
    certified: bool,
    out: *mut *mut c_char,
) -> BergmanStatus {
    guard(|| {
        let s = skeleton(&handle(f)?.fan, k)?;
        let basis = if certified { certified_weights(&s)? } else { solve_weights(&s) };
        let v = serde_json::to_value(io::solver_output(&s, &basis)).expect("serializable");
        write_out(out, into_c_string(pretty(&v)))
    })
}

/// Checks a weight file against the balancing condition.
///
/// # Safety
/// `f` must be a live handle, `weights` NUL-terminated, `balanced` writable.
#[no_mangle]
pub unsafe extern "C" fn bergman_weights_check_json(
    f: *const BergmanFan,
    weights: *const c_char,
    balanced: *mut bool,
) -> BergmanStatus {
    guard(|| {
        let fan = &handle(f)?.fan;
        let file = WeightFile::parse(str_arg(weights)?)?;
        let w = file.to_weights(fan.matroid())?;
        let s = skeleton(fan, file.k)?;
        write_out(balanced, check_weighted(&s, &w)?.all_balanced())
    })
}
