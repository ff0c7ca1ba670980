//! C ABI for the stabdist library.
//!
//! Conventions:
//! - Every fallible call returns a [`StabdistStatus`]; `Ok` is 0.
//! - On failure a thread-local message is set, readable through
//!   [`stabdist_last_error_message`].
//! - Arbitrary-precision values cross the boundary as decimal strings
//!   (`"36720"`) or compact rationals (`"3/5"`); callers pass a buffer and
//!   capacity, and `written` reports the required size (including the nul
//!   terminator) so a short buffer can be retried.
//! - Heap strings returned via out-pointers (`*_json`, canonical forms) must
//!   be released with [`stabdist_string_free`].
//! - Distributions are opaque handles created by
//!   [`stabdist_distribution_new`] and released by
//!   [`stabdist_distribution_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;

use stabdist::counts::{self, rational_to_f64, EntanglementDistribution, TailMode};
use stabdist::error::Error;
use stabdist::report;
use stabdist::sampling::{self, SamplerConfig};
use stabdist::state::{CutSpec, StabilizerState};

/// Result code of every fallible C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabdistStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainError = 3,
    BufferTooSmall = 4,
    InternalError = 5,
}

/// Lower limit convention of tail sums.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabdistTailMode {
    PaperLiteral = 0,
    Inclusive = 1,
}

impl From<StabdistTailMode> for TailMode {
    fn from(m: StabdistTailMode) -> TailMode {
        match m {
            StabdistTailMode::PaperLiteral => TailMode::PaperLiteral,
            StabdistTailMode::Inclusive => TailMode::Inclusive,
        }
    }
}

/// Opaque handle to an exact entanglement distribution.
pub struct StabdistDistribution {
    inner: EntanglementDistribution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn fail(err: &Error) -> StabdistStatus {
    set_last_error(&err.to_string());
    match err {
        Error::Domain(_) => StabdistStatus::DomainError,
        Error::Dimension(_) | Error::Contract(_) | Error::Parse(_) => {
            StabdistStatus::InvalidArgument
        }
    }
}

fn fail_null(what: &str) -> StabdistStatus {
    set_last_error(&format!("null pointer: {what}"));
    StabdistStatus::NullPointer
}

/// Copy `s` (plus nul) into `buf` of capacity `cap`; `written` always
/// receives the required size including the terminator.
unsafe fn write_str(
    s: &str,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    let needed = s.len() + 1;
    if !written.is_null() {
        *written = needed;
    }
    if buf.is_null() {
        return if written.is_null() {
            fail_null("output buffer and size pointer are both null")
        } else {
            StabdistStatus::Ok // size query
        };
    }
    if cap < needed {
        set_last_error(&format!("buffer of {cap} bytes, {needed} needed"));
        return StabdistStatus::BufferTooSmall;
    }
    std::ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    *buf.add(s.len()) = 0;
    StabdistStatus::Ok
}

unsafe fn heap_string(s: &str, out: *mut *mut c_char) -> StabdistStatus {
    if out.is_null() {
        return fail_null("output string pointer");
    }
    match CString::new(s.replace('\0', " ")) {
        Ok(c) => {
            *out = c.into_raw();
            StabdistStatus::Ok
        }
        Err(_) => {
            set_last_error("string contained interior nul");
            StabdistStatus::InternalError
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, StabdistStatus> {
    if p.is_null() {
        return Err(fail_null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        StabdistStatus::InvalidArgument
    })
}

unsafe fn out_f64(value: f64, out: *mut f64) -> StabdistStatus {
    if out.is_null() {
        return fail_null("output value pointer");
    }
    *out = value;
    StabdistStatus::Ok
}

/// Library version string; static storage, do not free.
#[no_mangle]
pub extern "C" fn stabdist_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// JSON schema version stamped into emitted documents; static, do not free.
#[no_mangle]
pub extern "C" fn stabdist_schema_version() -> *const c_char {
    concat!("stabdist/1", "\0").as_ptr().cast()
}

/// Retrieve the message of the most recent failure on this thread.
///
/// # Safety
/// `buf` must point to `cap` writable bytes (or be null for a size query);
/// `written` may be null.
#[no_mangle]
pub unsafe extern "C" fn stabdist_last_error_message(
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    let msg = LAST_ERROR.with(|slot| slot.borrow().to_string_lossy().into_owned());
    write_str(&msg, buf, cap, written)
}

/// Compute the exact entanglement distribution for a cut of `na` out of `n`
/// qubits. On success `*out` owns a handle that must be released with
/// [`stabdist_distribution_free`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_new(
    n: u32,
    na: u32,
    out: *mut *mut StabdistDistribution,
) -> StabdistStatus {
    if out.is_null() {
        return fail_null("output handle pointer");
    }
    match counts::distribution(n as usize, na as usize) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(StabdistDistribution { inner }));
            StabdistStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Release a distribution handle; null is a no-op.
///
/// # Safety
/// `d` must have come from [`stabdist_distribution_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_free(d: *mut StabdistDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

unsafe fn dist_arg<'a>(
    d: *const StabdistDistribution,
) -> Result<&'a EntanglementDistribution, StabdistStatus> {
    if d.is_null() {
        return Err(fail_null("distribution handle"));
    }
    Ok(&(*d).inner)
}

/// Number of entanglement levels, i.e. `min(N_A, N_B) + 1`.
///
/// # Safety
/// `d` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_num_levels(
    d: *const StabdistDistribution,
    out: *mut u32,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    if out.is_null() {
        return fail_null("output value pointer");
    }
    *out = dist.counts().len() as u32;
    StabdistStatus::Ok
}

unsafe fn level_arg(
    dist: &EntanglementDistribution,
    e: u32,
) -> Result<usize, StabdistStatus> {
    let e = e as usize;
    if e >= dist.counts().len() {
        set_last_error(&format!(
            "entanglement level {e} out of range 0..{}",
            dist.counts().len()
        ));
        return Err(StabdistStatus::InvalidArgument);
    }
    Ok(e)
}

/// Exact state count at level `e` as a decimal string.
///
/// # Safety
/// `d` must be a live handle; buffer contract as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_count_str(
    d: *const StabdistDistribution,
    e: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let e = match level_arg(dist, e) {
        Ok(x) => x,
        Err(s) => return s,
    };
    write_str(&dist.counts()[e].to_string(), buf, cap, written)
}

/// Total state count `n_tot(N)` as a decimal string.
///
/// # Safety
/// As [`stabdist_distribution_count_str`].
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_total_str(
    d: *const StabdistDistribution,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    write_str(&dist.total_states().to_string(), buf, cap, written)
}

/// Exact probability at level `e` as a compact rational string `num/den`.
///
/// # Safety
/// As [`stabdist_distribution_count_str`].
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_probability_str(
    d: *const StabdistDistribution,
    e: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let e = match level_arg(dist, e) {
        Ok(x) => x,
        Err(s) => return s,
    };
    write_str(&report::rational_compact(&dist.probs()[e]), buf, cap, written)
}

/// Probability at level `e` rounded to double precision.
///
/// # Safety
/// `d` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_probability_f64(
    d: *const StabdistDistribution,
    e: u32,
    out: *mut f64,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let e = match level_arg(dist, e) {
        Ok(x) => x,
        Err(s) => return s,
    };
    out_f64(rational_to_f64(&dist.probs()[e]), out)
}

/// The whole distribution as a `stabdist/1` JSON document. Free the result
/// with [`stabdist_string_free`].
///
/// # Safety
/// `d` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_distribution_json(
    d: *const StabdistDistribution,
    out: *mut *mut c_char,
) -> StabdistStatus {
    let dist = match dist_arg(d) {
        Ok(x) => x,
        Err(s) => return s,
    };
    heap_string(&report::distribution_json(dist).to_string(), out)
}

/// `n_tot(n)`, the total number of stabilizer states, as a decimal string.
///
/// # Safety
/// Buffer contract as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn stabdist_n_total_str(
    n: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    match counts::n_total(n as usize) {
        Ok(total) => write_str(&total.to_string(), buf, cap, written),
        Err(e) => fail(&e),
    }
}

/// Exact average entanglement as a compact rational string `num/den`.
///
/// # Safety
/// Buffer contract as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn stabdist_average_str(
    n: u32,
    na: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    match counts::average_entanglement(n as usize, na as usize) {
        Ok(avg) => write_str(&report::rational_compact(&avg), buf, cap, written),
        Err(e) => fail(&e),
    }
}

/// Average entanglement rounded to double precision.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_average_f64(n: u32, na: u32, out: *mut f64) -> StabdistStatus {
    match counts::average_entanglement(n as usize, na as usize) {
        Ok(avg) => out_f64(rational_to_f64(&avg), out),
        Err(e) => fail(&e),
    }
}

/// Float lower bound on the average entanglement.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_average_lower_bound(
    n: u32,
    na: u32,
    out: *mut f64,
) -> StabdistStatus {
    match counts::average_lower_bound(n as usize, na as usize) {
        Ok(v) => out_f64(v, out),
        Err(e) => fail(&e),
    }
}

/// Log-domain probability: `*out_exponent` receives the base-2 exponent,
/// `*out_probability` its power of two. Either out-pointer may be null.
///
/// # Safety
/// Non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_probability_log2(
    n: u32,
    na: u32,
    e: u32,
    out_exponent: *mut f64,
    out_probability: *mut f64,
) -> StabdistStatus {
    match counts::probability_log2(n as usize, na as usize, e as usize) {
        Ok(lp) => {
            if !out_exponent.is_null() {
                *out_exponent = lp.exponent;
            }
            if !out_probability.is_null() {
                *out_probability = lp.probability;
            }
            StabdistStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Exact lower-tail report as a `stabdist/1` JSON document. `epsilon` is a
/// rational string like `"2"` or `"5/2"`. Free the result with
/// [`stabdist_string_free`].
///
/// # Safety
/// `epsilon` must be a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_tail_json(
    n: u32,
    na: u32,
    epsilon: *const c_char,
    mode: StabdistTailMode,
    out: *mut *mut c_char,
) -> StabdistStatus {
    let eps_str = match str_arg(epsilon, "epsilon") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let eps = match report::parse_rational(eps_str) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match counts::tail_probability(n as usize, na as usize, &eps, mode.into()) {
        Ok(tail) => heap_string(&report::tail_json(n as usize, na as usize, &tail).to_string(), out),
        Err(e) => fail(&e),
    }
}

/// Gaussian-integral upper bound on the paper-literal lower tail.
///
/// # Safety
/// `epsilon` must be a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_tail_bound(
    n: u32,
    na: u32,
    epsilon: *const c_char,
    out: *mut f64,
) -> StabdistStatus {
    let eps_str = match str_arg(epsilon, "epsilon") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let eps = match report::parse_rational(eps_str) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match counts::tail_bound_gaussian(n as usize, na as usize, &eps) {
        Ok(v) => out_f64(v, out),
        Err(e) => fail(&e),
    }
}

/// Page average for Haar-random general states, in ebits. Exact harmonic
/// accumulation for N <= 24, Kahan-summed float fallback through N = 30,
/// domain error beyond that.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_page_average(n: u32, na: u32, out: *mut f64) -> StabdistStatus {
    let n = n as usize;
    let na = na as usize;
    let value = if n <= 24 { counts::page_average(n, na).map(|p| p.ebits) } else {
        counts::page_average_float(n, na)
    };
    match value {
        Ok(v) => out_f64(v, out),
        Err(e) => fail(&e),
    }
}

/// Exact ratio `n_(N_A-1)/n_(N_A)` as a compact rational string.
///
/// # Safety
/// Buffer contract as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn stabdist_mode_ratio_str(
    n: u32,
    na: u32,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> StabdistStatus {
    match counts::mode_ratio(n as usize, na as usize) {
        Ok(r) => write_str(&report::rational_compact(&r), buf, cap, written),
        Err(e) => fail(&e),
    }
}

/// Entanglement of an explicit stabilizer state across the prefix cut of
/// `na` qubits. `generators` holds one Pauli string per newline, e.g.
/// `"XXX\nIZZ\nZZI"`; the set is validated before use.
///
/// # Safety
/// `generators` must be a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_entanglement(
    generators: *const c_char,
    na: u32,
    out: *mut u32,
) -> StabdistStatus {
    let text = match str_arg(generators, "generators") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let state = match StabilizerState::from_str(text) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let cut = match CutSpec::prefix(na as usize, state.num_qubits()) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match state.entanglement(&cut) {
        Ok(e) => {
            if out.is_null() {
                return fail_null("output value pointer");
            }
            *out = e as u32;
            StabdistStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Canonical form of a stabilizer state, as newline-joined generator
/// strings. Two inputs generating the same signed group produce identical
/// output. Free the result with [`stabdist_string_free`].
///
/// # Safety
/// `generators` must be a nul-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_canonical_form(
    generators: *const c_char,
    out: *mut *mut c_char,
) -> StabdistStatus {
    let text = match str_arg(generators, "generators") {
        Ok(s) => s,
        Err(status) => return status,
    };
    match StabilizerState::from_str(text) {
        Ok(state) => heap_string(&state.canonical_form().to_string(), out),
        Err(e) => fail(&e),
    }
}

/// Sample `samples` uniform states with the given seed and worker count and
/// return the entanglement histogram as a `stabdist/1` JSON document. Free
/// the result with [`stabdist_string_free`].
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn stabdist_sample_histogram_json(
    n: u32,
    na: u32,
    samples: u64,
    seed: u64,
    workers: u32,
    out: *mut *mut c_char,
) -> StabdistStatus {
    let config = match SamplerConfig::new(n as usize, samples, seed, workers as usize) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match sampling::empirical_distribution(&config, na as usize) {
        Ok(hist) => heap_string(&report::histogram_json(&hist).to_string(), out),
        Err(e) => fail(&e),
    }
}

/// Release a string returned through an out-pointer; null is a no-op.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn stabdist_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
