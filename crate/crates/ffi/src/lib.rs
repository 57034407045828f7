//! C ABI over the `timdof` library.
//!
//! Every fallible function returns a [`TimdofStatus`]; on anything other than
//! `TIMDOF_STATUS_OK` a description is available from
//! [`timdof_last_error_message`] on the same thread. Strings handed out by
//! this library must be released with [`timdof_string_free`], topologies with
//! [`timdof_topology_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use timdof::verifier::monte_carlo_dof;
use timdof::{Dof, Error, LinearScheme, Topology};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimdofStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    SizeLimit = 4,
    Internal = 5,
    Panic = 6,
}

/// Opaque handle to a network topology.
pub struct TimdofTopology(Topology);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TimdofStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } => TimdofStatus::ParseError,
            Error::SizeGuard { .. } => TimdofStatus::SizeLimit,
            Error::CertificateRejected(_) => TimdofStatus::Internal,
            _ => TimdofStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TimdofStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure> + UnwindSafe) -> TimdofStatus {
    clear_last_error();
    match catch_unwind(f) {
        Ok(Ok(())) => TimdofStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            TimdofStatus::Panic
        }
    }
}

unsafe fn topology_ref<'a>(t: *const TimdofTopology) -> Result<&'a Topology, Failure> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| null("topology"))
}

unsafe fn input_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| {
        Failure(
            TimdofStatus::InvalidArgument,
            format!("{what} is not UTF-8: {e}"),
        )
    })
}

unsafe fn put_topology(
    out: *mut *mut TimdofTopology,
    t: Result<Topology, Error>,
) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(TimdofTopology(t?)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(s).map_err(|e| Failure(TimdofStatus::Internal, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

unsafe fn put_dof(num: *mut u64, den: *mut u64, d: Dof) -> Result<(), Failure> {
    if num.is_null() || den.is_null() {
        return Err(null("num/den"));
    }
    *num = d.numer();
    *den = d.denom();
    Ok(())
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn timdof_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn timdof_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_wyner(
    k: usize,
    out: *mut *mut TimdofTopology,
) -> TimdofStatus {
    guard(|| put_topology(out, timdof::wyner(k)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_cyclic_wyner(
    k: usize,
    out: *mut *mut TimdofTopology,
) -> TimdofStatus {
    guard(|| put_topology(out, timdof::cyclic_wyner(k)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_fully_connected(
    k: usize,
    out: *mut *mut TimdofTopology,
) -> TimdofStatus {
    guard(|| put_topology(out, timdof::fully_connected(k)))
}

/// Three users; links into receiver 3 from transmitters 1 and 2 stay
/// constant over two slots.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_figure4(out: *mut *mut TimdofTopology) -> TimdofStatus {
    guard(|| put_topology(out, Ok(timdof::figure4_example())))
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_from_json(
    json: *const c_char,
    out: *mut *mut TimdofTopology,
) -> TimdofStatus {
    guard(|| put_topology(out, Topology::from_json(input_str(json, "json")?)))
}

/// # Safety
/// `topology` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_to_json(
    topology: *const TimdofTopology,
    out: *mut *mut c_char,
) -> TimdofStatus {
    guard(|| put_string(out, topology_ref(topology)?.to_json()))
}

/// # Safety
/// `topology` must come from this library; `k` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_user_count(
    topology: *const TimdofTopology,
    k: *mut usize,
) -> TimdofStatus {
    guard(|| {
        let t = topology_ref(topology)?;
        *k.as_mut().ok_or_else(|| null("k"))? = t.k();
        Ok(())
    })
}

/// # Safety
/// `topology` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn timdof_topology_free(topology: *mut TimdofTopology) {
    if !topology.is_null() {
        drop(Box::from_raw(topology));
    }
}

/// Achievable sum DoF as `num / den` from an interference-avoidance schedule.
///
/// # Safety
/// `topology` must come from this library; `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_achievable_dof(
    topology: *const TimdofTopology,
    num: *mut u64,
    den: *mut u64,
) -> TimdofStatus {
    guard(|| {
        let cert = timdof::achievable_dof(topology_ref(topology)?)?;
        put_dof(num, den, cert.value())
    })
}

/// Best certified upper bound on the sum DoF as `num / den`. Exhaustive
/// receiver-set search runs up to `exhaustive_limit` users.
///
/// # Safety
/// `topology` must come from this library; `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_upper_bound(
    topology: *const TimdofTopology,
    exhaustive_limit: usize,
    num: *mut u64,
    den: *mut u64,
) -> TimdofStatus {
    guard(|| {
        let t = topology_ref(topology)?;
        let cert = timdof::upper_bound(t, exhaustive_limit);
        cert.validate(t)?;
        put_dof(num, den, cert.value())
    })
}

/// Full analysis report, with certificates, as JSON.
///
/// # Safety
/// `topology` must come from this library; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_analyze(
    topology: *const TimdofTopology,
    exhaustive_limit: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> TimdofStatus {
    guard(|| {
        let report = timdof::analyze(topology_ref(topology)?, exhaustive_limit, seed)?;
        let json = serde_json::to_string(&report)
            .map_err(|e| Failure(TimdofStatus::Internal, e.to_string()))?;
        put_string(out, json)
    })
}

/// Monte Carlo verification of a JSON linear scheme. Writes the verdict as
/// JSON to `out` and whether every active receiver decoded in every trial to
/// `fully_decodable`.
///
/// # Safety
/// `topology` must come from this library; `scheme_json` must be a
/// NUL-terminated string; `out` and `fully_decodable` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn timdof_verify_scheme(
    topology: *const TimdofTopology,
    scheme_json: *const c_char,
    trials: usize,
    seed: u64,
    out: *mut *mut c_char,
    fully_decodable: *mut bool,
) -> TimdofStatus {
    guard(|| {
        let t = topology_ref(topology)?;
        let scheme = LinearScheme::from_json(input_str(scheme_json, "scheme_json")?)?;
        let flag = fully_decodable
            .as_mut()
            .ok_or_else(|| null("fully_decodable"))?;
        let verdict = monte_carlo_dof(t, &scheme, trials, seed)?;
        let json = serde_json::to_string(&verdict)
            .map_err(|e| Failure(TimdofStatus::Internal, e.to_string()))?;
        put_string(out, json)?;
        *flag = verdict.fully_decodable;
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn timdof_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
