//! C ABI over sl2lab. Objects are opaque handles released with their `_free`
//! function; every fallible call returns an `Sl2Status` and leaves a message
//! for `sl2_last_error` on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sl2lab::constants::{babai_constant, compute_gamma, gap_bound};
use sl2lab::freegrp::GenSetZ;
use sl2lab::spectral::{spectrum, CayleyGraph, Method};
use sl2lab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Domain = 4,
    NoConvergence = 5,
    Panic = 6,
}

/// A symmetric generating set in SL₂(Z).
pub struct Sl2GenSet(GenSetZ);

/// The Cayley graph of SL₂(F_p) for a reduced generating set.
pub struct Sl2Graph(CayleyGraph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Method {
    Auto = 0,
    Dense = 1,
    Iterative = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> Sl2Status {
    match e {
        Error::Parse(_) | Error::Io(_) => Sl2Status::Parse,
        Error::NoConvergence { .. } => Sl2Status::NoConvergence,
        _ => Sl2Status::Domain,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (Sl2Status, String)>>(f: F) -> Sl2Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Sl2Status::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            Sl2Status::Panic
        }
    }
}

fn lib<T>(r: sl2lab::Result<T>) -> Result<T, (Sl2Status, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (Sl2Status, String) {
    (Sl2Status::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, (Sl2Status, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (Sl2Status::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (Sl2Status, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sl2_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from an sl2lab function returning an owned string, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Built-in set by name: "lubotzky" or "standard".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_genset_builtin(name: *const c_char, out: *mut *mut Sl2GenSet) -> Sl2Status {
    guard(|| {
        let name = str_arg(name)?;
        let s = GenSetZ::builtin(name)
            .ok_or_else(|| (Sl2Status::InvalidArgument, format!("unknown built-in set '{name}'")))?;
        write_out(out, Box::into_raw(Box::new(Sl2GenSet(s))))
    })
}

/// Parses one matrix literal per line, e.g. `[[1,3],[0,1]]`. With `close`,
/// missing inverses are added instead of rejected.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_genset_parse(text: *const c_char, close: bool, out: *mut *mut Sl2GenSet) -> Sl2Status {
    guard(|| {
        let s = lib(GenSetZ::parse_lines(str_arg(text)?, close))?;
        write_out(out, Box::into_raw(Box::new(Sl2GenSet(s))))
    })
}

/// # Safety
/// `s` must come from `sl2_genset_builtin`/`sl2_genset_parse`, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_genset_free(s: *mut Sl2GenSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of matrices, inverses included; 0 for NULL.
///
/// # Safety
/// `s` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_genset_len(s: *const Sl2GenSet) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Enclosures of γ_raw and γ = γ_raw/2⁹, rounded outward to doubles.
///
/// # Safety
/// `s` must be a live handle; the four output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_gamma(
    s: *const Sl2GenSet,
    raw_lo: *mut f64,
    raw_hi: *mut f64,
    eff_lo: *mut f64,
    eff_hi: *mut f64,
) -> Sl2Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let g = lib(compute_gamma(&s.0))?;
        write_out(raw_lo, g.raw.lo_f64())?;
        write_out(raw_hi, g.raw.hi_f64())?;
        write_out(eff_lo, g.eff.lo_f64())?;
        write_out(eff_hi, g.eff.hi_f64())
    })
}

/// The full bound report as JSON; free the string with `sl2_string_free`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_gap_bound_json(s: *const Sl2GenSet, out: *mut *mut c_char) -> Sl2Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let r = lib(gap_bound(&s.0))?;
        let json = serde_json::to_string(&r).map_err(|e| (Sl2Status::Domain, e.to_string()))?;
        let c = CString::new(json).map_err(|e| (Sl2Status::Domain, e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// Enclosure of ln 3 / ln(1 + 1/3024).
///
/// # Safety
/// `lo` and `hi` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_babai_constant(lo: *mut f64, hi: *mut f64) -> Sl2Status {
    guard(|| {
        let b = lib(babai_constant())?;
        let parse = |s: &str| s.parse::<f64>().map_err(|e| (Sl2Status::Domain, e.to_string()));
        // The decimal endpoints are already outward-rounded; widen by one ulp
        // to cover the decimal-to-double conversion.
        let (l, h) = (parse(&b.value.lo)?, parse(&b.value.hi)?);
        write_out(lo, l - l.abs() * f64::EPSILON)?;
        write_out(hi, h + h.abs() * f64::EPSILON)
    })
}

/// Builds the Cayley graph of SL₂(F_p) for `s` reduced mod p.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_new(p: u32, s: *const Sl2GenSet, out: *mut *mut Sl2Graph) -> Sl2Status {
    guard(|| {
        let s = s.as_ref().ok_or_else(null)?;
        let g = lib(CayleyGraph::build(p, &s.0))?;
        write_out(out, Box::into_raw(Box::new(Sl2Graph(g))))
    })
}

/// # Safety
/// `g` must come from `sl2_graph_new`, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_free(g: *mut Sl2Graph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// |SL₂(F_p)|; 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_order(g: *const Sl2Graph) -> u32 {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_diameter(g: *const Sl2Graph, out: *mut u32) -> Sl2Status {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        write_out(out, lib(g.0.diameter())?)
    })
}

/// Girth of the simple graph; 0 when it is a forest.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_girth(g: *const Sl2Graph, out: *mut u32) -> Sl2Status {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        write_out(out, g.0.girth().unwrap_or(0))
    })
}

/// λ₁ = 1 − ρ⁺ and the spectral radius ρ on the orthogonal complement of constants.
///
/// # Safety
/// `g` must be a live handle; `lambda1` and `rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl2_graph_spectrum(
    g: *const Sl2Graph,
    method: Sl2Method,
    seed: u64,
    lambda1: *mut f64,
    rho: *mut f64,
) -> Sl2Status {
    guard(|| {
        let g = g.as_ref().ok_or_else(null)?;
        let m = match method {
            Sl2Method::Auto => Method::Auto,
            Sl2Method::Dense => Method::Dense,
            Sl2Method::Iterative => Method::Iterative,
        };
        let r = lib(spectrum(&g.0, m, seed))?;
        write_out(lambda1, r.lambda1)?;
        write_out(rho, r.rho)
    })
}
