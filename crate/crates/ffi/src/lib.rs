//! C ABI over `xrat`.
//!
//! Groups and verdicts are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`XratStatus`]; on failure the
//! message is available from [`xrat_last_error_message`] on the same thread.
//! Strings returned through out-pointers are owned by the caller and must
//! be released with [`xrat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xrat::{decide, limits, Error, PermGroup, Permutation, ProjPoint, Verdict, VerdictKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XratStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed input: cycle notation, JSON, point syntax.
    Parse = 2,
    /// Well-formed input outside the domain of the operation.
    Precondition = 3,
    CapExceeded = 4,
    /// The result does not fit the output type.
    Overflow = 5,
    InvalidUtf8 = 6,
    BufferTooSmall = 7,
    /// A panic was caught at the boundary.
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XratVerdictKind {
    Rational = 0,
    NotUnirational = 1,
}

pub struct XratGroup {
    inner: PermGroup,
}

pub struct XratVerdict {
    inner: Verdict,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(XratStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CapExceeded { .. } => XratStatus::CapExceeded,
            ref e if e.is_parse() => XratStatus::Parse,
            _ => XratStatus::Precondition,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: XratStatus, message: &str) -> Result<T, Failure> {
    Err(Failure(status, message.to_string()))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> XratStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            XratStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            XratStatus::Internal
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(XratStatus::NullPointer, "null pointer argument".into()))
}

unsafe fn as_out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(XratStatus::NullPointer, "null output pointer".into()))
}

unsafe fn as_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(XratStatus::NullPointer, "null string argument");
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(XratStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(XratStatus::Internal, "interior NUL in output".into()))
}

/// Builds a group from `count` generators in cycle notation.
///
/// # Safety
/// `gens` must point to `count` NUL-terminated strings (it may be null when
/// `count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_new(
    degree: usize,
    gens: *const *const c_char,
    count: usize,
    out: *mut *mut XratGroup,
) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        if count > 0 && gens.is_null() {
            return fail(XratStatus::NullPointer, "null generator array");
        }
        let mut parsed = Vec::with_capacity(count);
        for i in 0..count {
            parsed.push(Permutation::parse_cycles(as_str(*gens.add(i))?, degree)?);
        }
        let inner = PermGroup::new(degree, parsed)?;
        *out = Box::into_raw(Box::new(XratGroup { inner }));
        Ok(())
    })
}

/// Builds a group from `{"degree": n, "generators": ["(1 2)", ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_from_json(json: *const c_char, out: *mut *mut XratGroup) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let inner = PermGroup::from_json(as_str(json)?)?;
        *out = Box::into_raw(Box::new(XratGroup { inner }));
        Ok(())
    })
}

/// # Safety
/// `group` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_free(group: *mut XratGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_degree(group: *const XratGroup, out: *mut usize) -> XratStatus {
    guard(|| {
        *as_out(out)? = as_ref(group)?.inner.degree();
        Ok(())
    })
}

/// Group order; `XRAT_STATUS_OVERFLOW` when it exceeds `uint64_t`.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_order(group: *const XratGroup, out: *mut u64) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let order = as_ref(group)?.inner.order();
        *out = u64::try_from(order).map_err(|_| Failure(XratStatus::Overflow, format!("order {order} exceeds 64 bits")))?;
        Ok(())
    })
}

/// # Safety
/// `group` must be a live handle, `perm` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_contains(
    group: *const XratGroup,
    perm: *const c_char,
    out: *mut bool,
) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let g = &as_ref(group)?.inner;
        let p = Permutation::parse_cycles(as_str(perm)?, g.degree())?;
        *out = g.contains(&p)?;
        Ok(())
    })
}

/// Writes the orbit sizes, ordered by least member, into `buf`. `out_len`
/// always receives the number of orbits; if it exceeds `cap` nothing is
/// written and `XRAT_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `group` must be a live handle, `buf` must hold `cap` entries (or be null
/// when `cap` is 0) and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_group_orbit_sizes(
    group: *const XratGroup,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> XratStatus {
    guard(|| {
        let out_len = as_out(out_len)?;
        let sizes = as_ref(group)?.inner.orbits().sizes();
        *out_len = sizes.len();
        if sizes.len() > cap {
            return fail(XratStatus::BufferTooSmall, "orbit buffer too small");
        }
        if !sizes.is_empty() {
            if buf.is_null() {
                return fail(XratStatus::NullPointer, "null orbit buffer");
            }
            ptr::copy_nonoverlapping(sizes.as_ptr(), buf, sizes.len());
        }
        Ok(())
    })
}

/// Decides rationality and returns the verdict with its certificate.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_decide(group: *const XratGroup, out: *mut *mut XratVerdict) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let inner = decide(&as_ref(group)?.inner)?;
        *out = Box::into_raw(Box::new(XratVerdict { inner }));
        Ok(())
    })
}

/// # Safety
/// `verdict` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xrat_verdict_kind(verdict: *const XratVerdict, out: *mut XratVerdictKind) -> XratStatus {
    guard(|| {
        *as_out(out)? = match as_ref(verdict)?.inner.kind() {
            VerdictKind::Rational => XratVerdictKind::Rational,
            VerdictKind::NotUnirational => XratVerdictKind::NotUnirational,
        };
        Ok(())
    })
}

/// Re-checks the certificate against `group`.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn xrat_verdict_validate(verdict: *const XratVerdict, group: *const XratGroup) -> XratStatus {
    guard(|| {
        as_ref(verdict)?.inner.validate(&as_ref(group)?.inner)?;
        Ok(())
    })
}

/// # Safety
/// `verdict` must be a live handle and `out` writable. Release the string
/// with `xrat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn xrat_verdict_to_json(verdict: *const XratVerdict, out: *mut *mut c_char) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let text = serde_json::to_string(&as_ref(verdict)?.inner)
            .map_err(|e| Failure(XratStatus::Internal, e.to_string()))?;
        *out = into_c_string(text)?;
        Ok(())
    })
}

/// # Safety
/// `verdict` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xrat_verdict_free(verdict: *mut XratVerdict) {
    if !verdict.is_null() {
        drop(Box::from_raw(verdict));
    }
}

/// Cross-ratio of four points written as `"n"`, `"n/d"` or `"inf"`. The
/// result uses the same notation.
///
/// # Safety
/// The four inputs must be NUL-terminated strings and `out` writable.
/// Release the string with `xrat_string_free`.
#[no_mangle]
pub unsafe extern "C" fn xrat_cross_ratio(
    p1: *const c_char,
    p2: *const c_char,
    p3: *const c_char,
    p4: *const c_char,
    out: *mut *mut c_char,
) -> XratStatus {
    guard(|| {
        let out = as_out(out)?;
        let mut pts = Vec::with_capacity(4);
        for p in [p1, p2, p3, p4] {
            pts.push(as_str(p)?.parse::<ProjPoint>()?);
        }
        let value = xrat::cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3])?;
        *out = into_c_string(value.to_string())?;
        Ok(())
    })
}

/// Sets the process-wide limit on explicit element enumeration.
#[no_mangle]
pub extern "C" fn xrat_set_enumeration_cap(cap: usize) {
    limits::set_enumeration_cap(cap);
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xrat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn xrat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
