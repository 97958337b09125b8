//! C interface to `triqal`.
//!
//! Algebras live behind an opaque [`TriqalAlgebra`] handle. Every function
//! returns a [`TriqalStatus`]; on failure a description is available from
//! [`triqal_last_error`] on the same thread. Strings handed out by the library
//! must be released with [`triqal_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use triqal::families::{self, Branch, FamilyParams, Sign, SixVars};
use triqal::frobenius::derive_m;
use triqal::io::AlgebraFile;
use triqal::lawrence::{axiom_residual, AxiomId};
use triqal::tensor::BasisPermutation;
use triqal::{lens, pentagon, BilinearForm, Error, Scalar};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriqalStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed JSON, bad UTF-8, out-of-range argument.
    InvalidInput = 2,
    SingularForm = 3,
    /// Tensor shapes or signatures do not fit together.
    Shape = 4,
    TooLarge = 5,
    Unsupported = 6,
    Panic = 7,
}

/// Opaque algebra handle.
pub struct TriqalAlgebra {
    file: AlgebraFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TriqalStatus {
    match e {
        Error::SingularForm => TriqalStatus::SingularForm,
        Error::TooLarge(_) => TriqalStatus::TooLarge,
        Error::Unsupported(_) => TriqalStatus::Unsupported,
        Error::Dimension(_)
        | Error::TagMismatch { .. }
        | Error::DuplicateLeg(_)
        | Error::InvalidLeg { .. }
        | Error::InvalidPermutation
        | Error::Signature(_)
        | Error::MissingM(_)
        | Error::OpenNetwork(_) => TriqalStatus::Shape,
        _ => TriqalStatus::InvalidInput,
    }
}

fn fail(status: TriqalStatus, message: impl Into<String>) -> TriqalStatus {
    set_error(message.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (TriqalStatus, String)>) -> TriqalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TriqalStatus::Ok,
        Ok(Err((status, message))) => fail(status, message),
        Err(_) => fail(TriqalStatus::Panic, "internal panic"),
    }
}

fn lift(e: Error) -> (TriqalStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TriqalStatus, String) {
    (TriqalStatus::NullPointer, format!("{what} is null"))
}

unsafe fn algebra<'a>(handle: *const TriqalAlgebra) -> Result<&'a TriqalAlgebra, (TriqalStatus, String)> {
    handle.as_ref().ok_or_else(|| null("algebra"))
}

fn form_of(file: &AlgebraFile) -> Result<BilinearForm, Error> {
    match &file.h {
        Some(m) => BilinearForm::new(m.clone()),
        None => Ok(BilinearForm::identity(file.n())),
    }
}

fn hand_out(handle: *mut *mut TriqalAlgebra, file: AlgebraFile) -> Result<(), (TriqalStatus, String)> {
    if handle.is_null() {
        return Err(null("out"));
    }
    let boxed = Box::into_raw(Box::new(TriqalAlgebra { file }));
    unsafe { *handle = boxed };
    Ok(())
}

fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (TriqalStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    unsafe { *out = value };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn triqal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses an algebra file (JSON, UTF-8, nul-terminated).
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_from_json(
    json: *const c_char,
    out: *mut *mut TriqalAlgebra,
) -> TriqalStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (TriqalStatus::InvalidInput, format!("json: {e}")))?;
        let file = AlgebraFile::from_json(text).map_err(lift)?;
        hand_out(out, file)
    })
}

/// Member of the two-dimensional solution families. `sign` is +1 or -1,
/// `branch` is 1 or 2.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_family(
    d_re: f64,
    d_im: f64,
    alpha_re: f64,
    alpha_im: f64,
    sign: i32,
    branch: i32,
    out: *mut *mut TriqalAlgebra,
) -> TriqalStatus {
    guard(|| {
        let sign = match sign {
            1 => Sign::Plus,
            -1 => Sign::Minus,
            s => return Err((TriqalStatus::InvalidInput, format!("sign must be +1 or -1, got {s}"))),
        };
        let branch = match branch {
            1 => Branch::First,
            2 => Branch::Second,
            b => return Err((TriqalStatus::InvalidInput, format!("branch must be 1 or 2, got {b}"))),
        };
        let d = Scalar::new(d_re, d_im);
        let alpha = Scalar::new(alpha_re, alpha_im);
        if !(d.is_finite() && alpha.is_finite()) {
            return Err((TriqalStatus::InvalidInput, "parameters must be finite".into()));
        }
        let vars = families::family(&FamilyParams { d, alpha, sign, branch }).map_err(lift)?;
        hand_out(out, AlgebraFile::new(BasisPermutation::identity(2), families::embed(&vars)))
    })
}

/// The identity solution in dimension two.
///
/// # Safety
/// `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_trivial(out: *mut *mut TriqalAlgebra) -> TriqalStatus {
    guard(|| {
        let q = families::embed(&SixVars::trivial());
        hand_out(out, AlgebraFile::new(BasisPermutation::identity(2), q))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_free(handle: *mut TriqalAlgebra) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be null or live; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_dimension(handle: *const TriqalAlgebra, out: *mut usize) -> TriqalStatus {
    guard(|| {
        let a = algebra(handle)?;
        write_out(out, a.file.n(), "out")
    })
}

/// Serializes the algebra file. Free the result with [`triqal_string_free`].
///
/// # Safety
/// `handle` must be null or live; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_algebra_to_json(handle: *const TriqalAlgebra, out: *mut *mut c_char) -> TriqalStatus {
    guard(|| {
        let a = algebra(handle)?;
        let c = CString::new(a.file.to_json()).map_err(|e| (TriqalStatus::InvalidInput, e.to_string()))?;
        write_out(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn triqal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Residual of axiom `axiom` (1 to 7). The file's `h`, or the identity, is
/// used to derive the ternary tensor when the file has none.
///
/// # Safety
/// `handle` must be null or live; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_axiom_residual(
    handle: *const TriqalAlgebra,
    axiom: u32,
    out: *mut f64,
) -> TriqalStatus {
    guard(|| {
        let a = algebra(handle)?;
        let which = (axiom as usize)
            .checked_sub(1)
            .and_then(|k| AxiomId::ALL.get(k).copied())
            .ok_or_else(|| (TriqalStatus::InvalidInput, format!("axiom must lie in 1..=7, got {axiom}")))?;
        let mut alg = a.file.algebra().map_err(lift)?;
        if which.needs_m() && alg.qm().is_none() {
            let h = form_of(&a.file).map_err(lift)?;
            let qm = derive_m(&a.file.qbar, &h).map_err(lift)?;
            alg = alg.with_qm(qm).map_err(lift)?;
        }
        write_out(out, axiom_residual(&alg, which).map_err(lift)?, "out")
    })
}

/// Which identity [`triqal_identity_residual`] evaluates.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriqalIdentity {
    Pentagon = 0,
    PentagonCoordinate = 1,
    Pachner14 = 2,
    Cubic = 3,
    Projector = 4,
}

/// # Safety
/// `handle` must be null or live; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_identity_residual(
    handle: *const TriqalAlgebra,
    which: u32,
    out: *mut f64,
) -> TriqalStatus {
    guard(|| {
        let a = algebra(handle)?;
        let q = &a.file.qbar;
        let r = match which {
            0 => pentagon::pentagon_residual(q),
            1 => pentagon::pentagon_coordinate_residual(q),
            2 => pentagon::pachner14_residual(q),
            3 => pentagon::cubic_residual(q),
            4 => pentagon::projector_matrix(q).map(|b| pentagon::projector_residual(&b)),
            w => return Err((TriqalStatus::InvalidInput, format!("unknown identity {w}"))),
        }
        .map_err(lift)?;
        write_out(out, r, "out")
    })
}

/// State-sum value of the lens space L(p,q) with the file's `h` (identity if
/// absent).
///
/// # Safety
/// `handle` must be null or live; `re` and `im` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn triqal_lens_invariant(
    handle: *const TriqalAlgebra,
    p: u32,
    q: u32,
    re: *mut f64,
    im: *mut f64,
) -> TriqalStatus {
    guard(|| {
        let a = algebra(handle)?;
        if re.is_null() || im.is_null() {
            return Err(null("out"));
        }
        let h = form_of(&a.file).map_err(lift)?;
        let v = lens::invariant(p as usize, q as usize, &a.file.qbar, &h).map_err(lift)?;
        write_out(re, v.re, "re")?;
        write_out(im, v.im, "im")
    })
}
