//! C interface to `hpcris`.
//!
//! Algebras, lifts and homology profiles live behind opaque handles. Every
//! fallible call returns an [`HpcrisStatus`]; on failure the message is
//! available from [`hpcris_last_error`] on the same thread. Strings returned
//! by the library are freed with [`hpcris_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hpcris::cli::is_input_error;
use hpcris::free_dga::{parse_algebra, FreeDga};
use hpcris::hp_cris::{crystalline_check, hp_cris_obj, CrisError, LiftSpec};
use hpcris::periodic::{hh_profile, hp_profile, HomologyProfile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HpcrisStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or an invalid algebra or lift.
    InvalidInput = 3,
    /// A verification inside the engine failed.
    MathFailure = 4,
    /// The output buffer is too small; the required size has been written.
    BufferTooSmall = 5,
    Panic = 6,
}

pub struct HpcrisAlgebra {
    dga: FreeDga,
}

pub struct HpcrisLift {
    lift: LiftSpec,
}

pub struct HpcrisProfile {
    profile: HomologyProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: HpcrisStatus, msg: impl Into<String>) -> HpcrisStatus {
    set_error(msg);
    status
}

fn cris_status(e: &CrisError) -> HpcrisStatus {
    if is_input_error(e) {
        HpcrisStatus::InvalidInput
    } else {
        HpcrisStatus::MathFailure
    }
}

/// Runs `f` with panics turned into [`HpcrisStatus::Panic`].
fn guarded(f: impl FnOnce() -> HpcrisStatus) -> HpcrisStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            fail(HpcrisStatus::Panic, format!("panic: {}", msg.unwrap_or_default()))
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, HpcrisStatus> {
    if s.is_null() {
        return Err(fail(HpcrisStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(HpcrisStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> HpcrisStatus {
    *out = Box::into_raw(Box::new(value));
    HpcrisStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(HpcrisStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Engine name and version, static.
#[no_mangle]
pub extern "C" fn hpcris_version() -> *const c_char {
    concat!("hpcris ", env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn hpcris_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is null or was returned by this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn hpcris_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an algebra document.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_algebra_parse(json: *const c_char, out: *mut *mut HpcrisAlgebra) -> HpcrisStatus {
    guarded(|| {
        non_null!(out);
        let json = try_status!(text(json));
        match parse_algebra(json) {
            Ok(dga) => write_handle(out, HpcrisAlgebra { dga }),
            Err(e) => fail(HpcrisStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `alg` is null or a live handle from [`hpcris_algebra_parse`].
#[no_mangle]
pub unsafe extern "C" fn hpcris_algebra_free(alg: *mut HpcrisAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Parses a lift of the differential of `alg` to `Z/p^2` and checks that it
/// reduces to that differential mod `p`.
///
/// # Safety
/// `alg` is a live handle, `json` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_lift_parse(
    alg: *const HpcrisAlgebra,
    json: *const c_char,
    out: *mut *mut HpcrisLift,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(alg, out);
        let json = try_status!(text(json));
        let dga = &(*alg).dga;
        match LiftSpec::parse(json, dga).and_then(|l| l.check_reduces_to(dga).map(|()| l)) {
            Ok(lift) => write_handle(out, HpcrisLift { lift }),
            Err(e) => fail(cris_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `lift` is null or a live handle from [`hpcris_lift_parse`].
#[no_mangle]
pub unsafe extern "C" fn hpcris_lift_free(lift: *mut HpcrisLift) {
    if !lift.is_null() {
        drop(Box::from_raw(lift));
    }
}

/// Hochschild homology per weight and degree up to `weight_max`.
///
/// # Safety
/// `alg` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_hh(
    alg: *const HpcrisAlgebra,
    weight_max: u32,
    out: *mut *mut HpcrisProfile,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(alg, out);
        match hh_profile(&(*alg).dga, weight_max) {
            Ok(profile) => write_handle(out, HpcrisProfile { profile }),
            Err(e) => fail(HpcrisStatus::MathFailure, e.to_string()),
        }
    })
}

/// Periodic cyclic homology per weight and parity up to `weight_max`.
///
/// # Safety
/// `alg` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_hp(
    alg: *const HpcrisAlgebra,
    weight_max: u32,
    out: *mut *mut HpcrisProfile,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(alg, out);
        match hp_profile(&(*alg).dga, weight_max) {
            Ok(profile) => write_handle(out, HpcrisProfile { profile }),
            Err(e) => fail(HpcrisStatus::MathFailure, e.to_string()),
        }
    })
}

/// Crystalline periodic cyclic homology of `alg` (over `F_p`) from `lift`.
///
/// # Safety
/// `alg` and `lift` are live handles with `lift` parsed against `alg`; `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_hp_cris(
    alg: *const HpcrisAlgebra,
    lift: *const HpcrisLift,
    weight_max: u32,
    out: *mut *mut HpcrisProfile,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(alg, lift, out);
        match hp_cris_obj(&(*alg).dga, &(*lift).lift, weight_max).and_then(|c| c.profile()) {
            Ok(profile) => write_handle(out, HpcrisProfile { profile }),
            Err(e) => fail(cris_status(&e), e.to_string()),
        }
    })
}

/// Compares the crystalline profile from `lift` with `HP` of a square-zero
/// lift: `reference` when non-null, otherwise the verbatim lift. Writes 1 to
/// `equal` when the profiles agree and 0 otherwise.
///
/// # Safety
/// Handles are live and parsed against `alg`; `reference` may be null;
/// `equal` is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_compare_with_lift(
    alg: *const HpcrisAlgebra,
    lift: *const HpcrisLift,
    reference: *const HpcrisLift,
    weight_max: u32,
    equal: *mut i32,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(alg, lift, equal);
        let reference = reference.as_ref().map(|r| &r.lift);
        match crystalline_check(&(*alg).dga, &(*lift).lift, reference, weight_max) {
            Ok(v) => {
                *equal = v.equal as i32;
                HpcrisStatus::Ok
            }
            Err(e) => fail(cris_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `profile` is null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn hpcris_profile_free(profile: *mut HpcrisProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// The profile as JSON; free with [`hpcris_string_free`].
///
/// # Safety
/// `profile` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn hpcris_profile_json(profile: *const HpcrisProfile, out: *mut *mut c_char) -> HpcrisStatus {
    guarded(|| {
        non_null!(profile, out);
        let json = serde_json::to_string(&(*profile).profile).expect("profiles serialize");
        *out = CString::new(json).expect("JSON has no nul").into_raw();
        HpcrisStatus::Ok
    })
}

/// Exponent `e` of each cyclic summand `Z/p^e` of the group at `(weight, key)`,
/// ascending, with free summands reported as the ring exponent. `key` is the
/// degree for HH and the parity for HP. Writes the summand count to `len`;
/// `exponents` may be null to query the count.
///
/// # Safety
/// `profile` is a live handle, `len` writable, `exponents` null or writable
/// for `capacity` entries.
#[no_mangle]
pub unsafe extern "C" fn hpcris_profile_group(
    profile: *const HpcrisProfile,
    weight: u32,
    key: i64,
    exponents: *mut u32,
    capacity: usize,
    len: *mut usize,
) -> HpcrisStatus {
    guarded(|| {
        non_null!(profile, len);
        let p = &(*profile).profile;
        let e = p.get(weight, key).exponents(p.base.n());
        *len = e.len();
        if exponents.is_null() {
            return HpcrisStatus::Ok;
        }
        if capacity < e.len() {
            return fail(HpcrisStatus::BufferTooSmall, format!("{} summands, capacity {capacity}", e.len()));
        }
        ptr::copy_nonoverlapping(e.as_ptr(), exponents, e.len());
        HpcrisStatus::Ok
    })
}

/// 1 when the two profiles have the same groups everywhere, else 0; -1 on a
/// null argument.
///
/// # Safety
/// Both arguments are null or live handles.
#[no_mangle]
pub unsafe extern "C" fn hpcris_profile_equal(a: *const HpcrisProfile, b: *const HpcrisProfile) -> i32 {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.profile.same_groups(&b.profile) as i32,
        _ => -1,
    }
}
