//! C ABI for `spindle`.
//!
//! Every entry point returns a [`SpindleStatus`]. Results come back through
//! out-pointers; structured results are UTF-8 JSON strings in the same `v1`
//! schema the command-line tool prints, and must be released with
//! [`spindle_string_free`]. After a non-`Ok` status,
//! [`spindle_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use spindle::cli::{cmd_branch_report, cmd_char_report, cmd_jantzen_report, cmd_structure_report};
use spindle::rootdata::root_system;
use spindle::{charcalc, structure, Error, Family, GroupType, RootSystem, Weight};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpindleStatus {
    Ok = 0,
    NullPointer = 1,
    UnsupportedFamily = 2,
    InvalidRank = 3,
    DimensionMismatch = 4,
    NotDominant = 5,
    InvalidPrime = 6,
    UnsupportedCharacteristic = 7,
    InvalidWeight = 8,
    NotInLattice = 9,
    Overflow = 10,
    UnknownFactorization = 11,
    AmbiguousMultiplicity = 12,
    Internal = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpindleFamily {
    A = 0,
    B = 1,
    D = 2,
}

impl From<SpindleFamily> for Family {
    fn from(f: SpindleFamily) -> Self {
        match f {
            SpindleFamily::A => Family::A,
            SpindleFamily::B => Family::B,
            SpindleFamily::D => Family::D,
        }
    }
}

/// Opaque handle to a root system.
pub struct SpindleRootSystem {
    inner: Arc<RootSystem>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SpindleStatus {
    match e {
        Error::UnsupportedFamily(_) => SpindleStatus::UnsupportedFamily,
        Error::InvalidRank { .. } => SpindleStatus::InvalidRank,
        Error::DimensionMismatch { .. } => SpindleStatus::DimensionMismatch,
        Error::NotDominant(_) => SpindleStatus::NotDominant,
        Error::InvalidPrime(_) => SpindleStatus::InvalidPrime,
        Error::UnsupportedCharacteristic(_) => SpindleStatus::UnsupportedCharacteristic,
        Error::InvalidWeight(_) => SpindleStatus::InvalidWeight,
        Error::NotInLattice(_) | Error::NotInRootLattice(_) | Error::ZeroRoot => SpindleStatus::NotInLattice,
        Error::Overflow(_) => SpindleStatus::Overflow,
        Error::UnknownFactorization { .. } => SpindleStatus::UnknownFactorization,
        Error::AmbiguousMultiplicity(_) => SpindleStatus::AmbiguousMultiplicity,
        Error::NotInvariant | Error::Internal(_) => SpindleStatus::Internal,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SpindleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SpindleStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            SpindleStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(format!("{}: {e}", e.code()));
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            SpindleStatus::Panic
        }
    }
}

unsafe fn handle<'a>(h: *const SpindleRootSystem) -> Result<&'a SpindleRootSystem, Fail> {
    h.as_ref().ok_or(Fail::Null("root system handle"))
}

unsafe fn weight(coords: *const i64, len: usize) -> Result<Weight, Fail> {
    if len == 0 {
        return Ok(Weight(Vec::new()));
    }
    if coords.is_null() {
        return Err(Fail::Null("coords"));
    }
    Ok(Weight(std::slice::from_raw_parts(coords, len).to_vec()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null("out"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_json(out: *mut *mut c_char, v: &impl serde::Serialize) -> Result<(), Fail> {
    let s = serde_json::to_string(v).map_err(|e| Error::Internal(e.to_string()))?;
    let c = CString::new(s).map_err(|e| Error::Internal(e.to_string()))?;
    put(out, c.into_raw())
}

/// Creates a root system of the given family and rank.
///
/// # Safety
/// `out` must be valid for writes. The handle must be released with
/// [`spindle_root_system_free`].
#[no_mangle]
pub unsafe extern "C" fn spindle_root_system_new(
    family: SpindleFamily,
    rank: usize,
    out: *mut *mut SpindleRootSystem,
) -> SpindleStatus {
    guard(|| {
        let g = GroupType::new(family.into(), rank)?;
        let inner = root_system(g)?;
        put(out, Box::into_raw(Box::new(SpindleRootSystem { inner })))
    })
}

/// # Safety
/// `h` must be null or a handle from [`spindle_root_system_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spindle_root_system_free(h: *mut SpindleRootSystem) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Rank of the root system, 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spindle_root_system_rank(h: *const SpindleRootSystem) -> usize {
    h.as_ref().map_or(0, |h| h.inner.rank())
}

/// `dim V(λ)` by Weyl's formula.
///
/// # Safety
/// `h` must be a live handle, `coords` must point to `len` integers and
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spindle_weyl_dim(
    h: *const SpindleRootSystem,
    coords: *const i64,
    len: usize,
    out: *mut i64,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        let d = charcalc::weyl_dim(&h.inner, &weight(coords, len)?)?;
        put(out, d)
    })
}

/// `dim L(λ)` in characteristic `p` for the weights the structure solver covers.
///
/// # Safety
/// As for [`spindle_weyl_dim`].
#[no_mangle]
pub unsafe extern "C" fn spindle_irreducible_dim(
    h: *const SpindleRootSystem,
    p: u64,
    coords: *const i64,
    len: usize,
    out: *mut i64,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        let w = weight(coords, len)?;
        let d = if p == 0 {
            charcalc::weyl_dim(&h.inner, &w)?
        } else {
            structure::irreducible_dim(&h.inner, p, &w)?
        };
        put(out, d)
    })
}

/// Dominant multiplicities of `ch V(λ)` as a JSON report.
///
/// # Safety
/// `h` must be a live handle, `coords` must point to `len` integers and
/// `out` must be valid for writes. Free the string with [`spindle_string_free`].
#[no_mangle]
pub unsafe extern "C" fn spindle_character_json(
    h: *const SpindleRootSystem,
    coords: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        put_json(out, &cmd_char_report(h.inner.group(), &weight(coords, len)?)?)
    })
}

/// Composition factors and radical of `V(λ)`, with the published table row
/// when `diff_tables` is nonzero.
///
/// # Safety
/// As for [`spindle_character_json`].
#[no_mangle]
pub unsafe extern "C" fn spindle_structure_json(
    h: *const SpindleRootSystem,
    p: u64,
    coords: *const i64,
    len: usize,
    diff_tables: i32,
    out: *mut *mut c_char,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        let r = cmd_structure_report(h.inner.group(), p, &weight(coords, len)?, diff_tables != 0)?;
        put_json(out, &r)
    })
}

/// The Jantzen sum of `λ`; truncated below `μ` when `mu_coords` is non-null.
///
/// # Safety
/// As for [`spindle_character_json`]; `mu_coords`, if non-null, must point
/// to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn spindle_jantzen_json(
    h: *const SpindleRootSystem,
    p: u64,
    coords: *const i64,
    mu_coords: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        let lambda = weight(coords, len)?;
        let mu = if mu_coords.is_null() { None } else { Some(weight(mu_coords, len)?) };
        put_json(out, &cmd_jantzen_report(h.inner.group(), p, &lambda, mu.as_ref())?)
    })
}

/// Composition factors of `L(λ₁+λ_j)` restricted from `SL(W)` to the group
/// of `h` (type B or D). `coords` are `SL(W)` fundamental coordinates.
///
/// # Safety
/// As for [`spindle_character_json`].
#[no_mangle]
pub unsafe extern "C" fn spindle_branch_json(
    h: *const SpindleRootSystem,
    p: u64,
    coords: *const i64,
    len: usize,
    diff_tables: i32,
    out: *mut *mut c_char,
) -> SpindleStatus {
    guard(|| {
        let h = handle(h)?;
        let r = cmd_branch_report(h.inner.group(), p, &weight(coords, len)?, diff_tables != 0)?;
        put_json(out, &r)
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spindle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn spindle_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Stable name of a status code, as a static string.
#[no_mangle]
pub extern "C" fn spindle_status_name(s: SpindleStatus) -> *const c_char {
    let name: &'static CStr = match s {
        SpindleStatus::Ok => c"ok",
        SpindleStatus::NullPointer => c"null-pointer",
        SpindleStatus::UnsupportedFamily => c"unsupported-family",
        SpindleStatus::InvalidRank => c"invalid-rank",
        SpindleStatus::DimensionMismatch => c"dimension-mismatch",
        SpindleStatus::NotDominant => c"not-dominant",
        SpindleStatus::InvalidPrime => c"invalid-prime",
        SpindleStatus::UnsupportedCharacteristic => c"unsupported-characteristic",
        SpindleStatus::InvalidWeight => c"invalid-weight",
        SpindleStatus::NotInLattice => c"not-in-lattice",
        SpindleStatus::Overflow => c"overflow",
        SpindleStatus::UnknownFactorization => c"unknown-factorization",
        SpindleStatus::AmbiguousMultiplicity => c"ambiguous-multiplicity",
        SpindleStatus::Internal => c"internal",
        SpindleStatus::Panic => c"panic",
    };
    name.as_ptr()
}
