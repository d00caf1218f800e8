//! C ABI for `colstab`.
//!
//! Values cross the boundary as opaque handles (`ColstabPoly`,
//! `ColstabMatrix`) or as NUL-terminated UTF-8 strings owned by the library.
//! Every fallible call returns a `ColstabStatus`; on failure the message is
//! available from `colstab_last_error()` on the same thread.
//!
//! Ownership: handles from `*_parse`, `*_from_json`, `colstab_poly_mul`,
//! `colstab_poly_add` and `colstab_rho` are freed with the matching `*_free`.
//! Strings written to an `out` parameter are freed with
//! `colstab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use colstab::matrix::{Mat, MatrixDoc};
use colstab::stab::{check_stab, preimage, residues, rho, CongruenceMatrix, PreimageStatus, SearchBudget};
use colstab::{Error, Mode, RingDescriptor, RingElement};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColstabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    RingMismatch = 4,
    NotStabilizing = 5,
    NotInvertible = 6,
    NotInScheme = 7,
    Obstructed = 8,
    DomainError = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColstabMode {
    Polynomial = 0,
    Laurent = 1,
}

/// A ring element.
pub struct ColstabPoly(RingElement);

/// A matrix over a ring.
pub struct ColstabMatrix(Mat<RingElement>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ColstabStatus {
    match e {
        Error::Parse { .. } | Error::NegativeExponent { .. } | Error::Document(_) => ColstabStatus::ParseError,
        Error::RingMismatch { .. } => ColstabStatus::RingMismatch,
        Error::NotStabilizing { .. } => ColstabStatus::NotStabilizing,
        Error::NotInvertible { .. } | Error::NotAUnit { .. } => ColstabStatus::NotInvertible,
        Error::NotInScheme(_) => ColstabStatus::NotInScheme,
        _ => ColstabStatus::DomainError,
    }
}

/// Run `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<ColstabStatus, (ColstabStatus, String)>) -> ColstabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            ColstabStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ColstabStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ColstabStatus, String) {
    (ColstabStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ColstabStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (ColstabStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (ColstabStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| (ColstabStatus::DomainError, "output contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), (ColstabStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ColstabStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// The message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn colstab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Free a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn colstab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a polynomial over the ring with the given mode and number of
/// variables (integer coefficients).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_parse(
    mode: ColstabMode,
    nvars: u32,
    text: *const c_char,
    out: *mut *mut ColstabPoly,
) -> ColstabStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if nvars == 0 || nvars > 9 {
            return Err((ColstabStatus::DomainError, format!("nvars must be in 1..=9, got {nvars}")));
        }
        let mode = match mode {
            ColstabMode::Polynomial => Mode::Polynomial,
            ColstabMode::Laurent => Mode::Laurent,
        };
        let g = RingDescriptor::new(mode, nvars as usize).parse(text).map_err(lib_err)?;
        write_handle(out, ColstabPoly(g))?;
        Ok(ColstabStatus::Ok)
    })
}

/// Canonical text of a polynomial.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_to_string(p: *const ColstabPoly, out: *mut *mut c_char) -> ColstabStatus {
    guard(|| {
        let p = borrow(p, "poly")?;
        write_string(out, p.0.to_string())?;
        Ok(ColstabStatus::Ok)
    })
}

/// `*out = a + b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_add(
    a: *const ColstabPoly,
    b: *const ColstabPoly,
    out: *mut *mut ColstabPoly,
) -> ColstabStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        write_handle(out, ColstabPoly(a.0.checked_add(&b.0).map_err(lib_err)?))?;
        Ok(ColstabStatus::Ok)
    })
}

/// `*out = a * b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_mul(
    a: *const ColstabPoly,
    b: *const ColstabPoly,
    out: *mut *mut ColstabPoly,
) -> ColstabStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        write_handle(out, ColstabPoly(a.0.checked_mul(&b.0).map_err(lib_err)?))?;
        Ok(ColstabStatus::Ok)
    })
}

/// Whether `p` is invertible in its ring.
///
/// # Safety
/// `p` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_is_unit(p: *const ColstabPoly) -> bool {
    p.as_ref().is_some_and(|p| p.0.is_unit())
}

/// # Safety
/// `p` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn colstab_poly_free(p: *mut ColstabPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Read a JSON matrix document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_matrix_from_json(json: *const c_char, out: *mut *mut ColstabMatrix) -> ColstabStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let doc = MatrixDoc::from_json(text).map_err(lib_err)?;
        write_handle(out, ColstabMatrix(Mat::from_doc(&doc).map_err(lib_err)?))?;
        Ok(ColstabStatus::Ok)
    })
}

/// Canonical JSON document of a matrix.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_matrix_to_json(m: *const ColstabMatrix, out: *mut *mut c_char) -> ColstabStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        write_string(out, m.0.to_doc().to_json())?;
        Ok(ColstabStatus::Ok)
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn colstab_matrix_free(m: *mut ColstabMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `Ok` iff `m` fixes the column `(c1, c2, c3)` and has a unit determinant;
/// otherwise `NotStabilizing` or `NotInvertible`.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn colstab_check_stab(m: *const ColstabMatrix) -> ColstabStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        check_stab(&m.0).map_err(lib_err)?;
        Ok(ColstabStatus::Ok)
    })
}

/// Residues as `{"alpha":..,"beta":..,"gamma":..,"delta":..}`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_residues_json(m: *const ColstabMatrix, out: *mut *mut c_char) -> ColstabStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let q = check_stab(&m.0).and_then(|a| residues(&a)).map_err(lib_err)?;
        write_string(out, q.to_json_value().to_string())?;
        Ok(ColstabStatus::Ok)
    })
}

/// The 2×2 image of a stabilizer.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_rho(m: *const ColstabMatrix, out: *mut *mut ColstabMatrix) -> ColstabStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let b = check_stab(&m.0).and_then(|a| rho(&a)).map_err(lib_err)?;
        write_handle(out, ColstabMatrix(b.into_matrix()))?;
        Ok(ColstabStatus::Ok)
    })
}

/// Preimage report for a 2×2 scheme matrix, as JSON. Returns `Obstructed`
/// (with the report still written) when no preimage was found within
/// `max_word_len`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn colstab_preimage_json(
    m: *const ColstabMatrix,
    max_word_len: u32,
    out: *mut *mut c_char,
) -> ColstabStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let budget = SearchBudget { max_word_len: max_word_len as usize, ..SearchBudget::default() };
        let rep = CongruenceMatrix::new(m.0.clone()).and_then(|b| preimage(&b, &budget)).map_err(lib_err)?;
        let text = serde_json::to_string(&rep.to_doc()).expect("report serializes");
        write_string(out, text)?;
        Ok(match rep.status {
            PreimageStatus::Success => ColstabStatus::Ok,
            PreimageStatus::Obstructed => ColstabStatus::Obstructed,
        })
    })
}
