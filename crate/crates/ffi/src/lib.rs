//! C ABI for `framerep`.
//!
//! Matrices and frames cross the boundary as opaque handles created by
//! `frm_*_new` or returned through out-pointers, and released with the
//! matching `frm_*_free`. Complex numbers are passed as interleaved `double`
//! pairs `(re, im)`; matrices are row-major and frames are `count` vectors of
//! `dim` complex entries each.
//!
//! Every fallible function returns an [`FrmStatus`]. On failure the message
//! is available from [`frm_last_error_message`] until the next failing call
//! on the same thread. Out-pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use framerep::formats;
use framerep::oprep::{
    frame_multiplier, kernel_of_representation, matrix_of_operator, operator_of_matrix,
};
use framerep::solveq::{solve, SolveOptions};
use framerep::{Complex64, ComplexMatrix, ComplexVector, Error, Frame, FrameClass, LinearOperator};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NonSquare = 4,
    NotHermitian = 5,
    NotAFrame = 6,
    SectionTooLarge = 7,
    NonFinite = 8,
    Empty = 9,
    IncompatibleFrames = 10,
    Parse = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

/// Structural class of a frame, strongest first in the order of checking.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrmFrameClass {
    BesselOnly = 0,
    Frame = 1,
    TightFrame = 2,
    ParsevalFrame = 3,
    RieszBasis = 4,
    OrthonormalBasis = 5,
}

impl From<FrameClass> for FrmFrameClass {
    fn from(c: FrameClass) -> Self {
        match c {
            FrameClass::BesselOnly => FrmFrameClass::BesselOnly,
            FrameClass::Frame => FrmFrameClass::Frame,
            FrameClass::TightFrame => FrmFrameClass::TightFrame,
            FrameClass::ParsevalFrame => FrmFrameClass::ParsevalFrame,
            FrameClass::RieszBasis => FrmFrameClass::RieszBasis,
            FrameClass::OrthonormalBasis => FrmFrameClass::OrthonormalBasis,
        }
    }
}

/// Opaque dense complex matrix.
pub struct FrmMatrix(ComplexMatrix);

/// Opaque frame of vectors in `C^dim`.
pub struct FrmFrame(Frame);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FrmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch(_) => FrmStatus::DimensionMismatch,
            Error::NonSquare { .. } => FrmStatus::NonSquare,
            Error::NotHermitian { .. } => FrmStatus::NotHermitian,
            Error::NotAFrame { .. } => FrmStatus::NotAFrame,
            Error::SectionTooLarge { .. } => FrmStatus::SectionTooLarge,
            Error::NonFinite(_) => FrmStatus::NonFinite,
            Error::Empty(_) => FrmStatus::Empty,
            Error::IncompatibleFrames(_) => FrmStatus::IncompatibleFrames,
            Error::Parse { .. } => FrmStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FrmStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FrmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FrmStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            FrmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn complex_slice(
    data: *const f64,
    count: usize,
    what: &str,
) -> Result<Vec<Complex64>, Failure> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if data.is_null() {
        return Err(null(what));
    }
    let raw = std::slice::from_raw_parts(data, 2 * count);
    Ok(raw
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

unsafe fn copy_complex(values: &[Complex64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len < 2 * values.len() {
        return Err(Failure(
            FrmStatus::BufferTooSmall,
            format!("buffer holds {len} doubles, {} required", 2 * values.len()),
        ));
    }
    let dst = std::slice::from_raw_parts_mut(out, 2 * values.len());
    for (pair, z) in dst.chunks_exact_mut(2).zip(values) {
        pair[0] = z.re;
        pair[1] = z.im;
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn string_out(text: String) -> *mut c_char {
    CString::new(text)
        .expect("serialized JSON has no NUL")
        .into_raw()
}

unsafe fn str_in<'a>(text: *const c_char) -> Result<&'a str, Failure> {
    if text.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(text).to_str().map_err(|e| {
        Failure(
            FrmStatus::InvalidArgument,
            format!("text is not UTF-8: {e}"),
        )
    })
}

/// Message of the last failure on this thread, or NULL if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn frm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by a `*_to_json` function.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn frm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Matrices

/// Creates a `rows × cols` matrix from `2·rows·cols` interleaved doubles.
///
/// # Safety
/// `data` must point to `2·rows·cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let entries = complex_slice(data, rows.saturating_mul(cols), "data")?;
        let m = ComplexMatrix::new(rows, cols, entries)?;
        write_out(out, boxed(FrmMatrix(m)))
    })
}

/// # Safety
/// `m` must be NULL or a live matrix handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_free(m: *mut FrmMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_rows(m: *const FrmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Number of columns, or 0 for NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_cols(m: *const FrmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Copies the entries row-major into `out`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_copy_entries(
    m: *const FrmMatrix,
    out: *mut f64,
    len: usize,
) -> FrmStatus {
    guard(|| copy_complex(deref(m, "matrix")?.0.as_slice(), out, len))
}

/// Parses the canonical JSON (or real CSV) matrix format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_from_json(
    text: *const c_char,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let m = formats::parse_matrix(str_in(text)?)?;
        write_out(out, boxed(FrmMatrix(m)))
    })
}

/// Serializes to canonical JSON; release the result with [`frm_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_to_json(
    m: *const FrmMatrix,
    out: *mut *mut c_char,
) -> FrmStatus {
    guard(|| {
        let text = formats::serialize_matrix(&deref(m, "matrix")?.0);
        write_out(out, string_out(text))
    })
}

// ---------------------------------------------------------------------------
// Frames

/// Creates a frame of `count` vectors in `C^dim` from `2·dim·count`
/// interleaved doubles, vector after vector.
///
/// # Safety
/// `data` must point to `2·dim·count` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_new(
    dim: usize,
    count: usize,
    data: *const f64,
    out: *mut *mut FrmFrame,
) -> FrmStatus {
    guard(|| {
        if dim == 0 || count == 0 {
            return Err(Error::Empty(
                "frame must contain at least one vector of positive dimension".into(),
            )
            .into());
        }
        let entries = complex_slice(data, dim.saturating_mul(count), "data")?;
        let vectors = entries
            .chunks_exact(dim)
            .map(|v| ComplexVector::new(v.to_vec()))
            .collect::<Result<Vec<_>, _>>()?;
        write_out(out, boxed(FrmFrame(Frame::new(vectors)?)))
    })
}

/// # Safety
/// `f` must be NULL or a live frame handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_free(f: *mut FrmFrame) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Dimension of the space, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live frame handle.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_dim(f: *const FrmFrame) -> usize {
    f.as_ref().map_or(0, |f| f.0.space_dim())
}

/// Number of vectors, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live frame handle.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_count(f: *const FrmFrame) -> usize {
    f.as_ref().map_or(0, |f| f.0.count())
}

/// Copies the vectors, one after another, into `out` holding `len` doubles.
///
/// # Safety
/// `f` must be a live handle and `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_copy_vectors(
    f: *const FrmFrame,
    out: *mut f64,
    len: usize,
) -> FrmStatus {
    guard(|| {
        let values: Vec<Complex64> = deref(f, "frame")?
            .0
            .vectors()
            .iter()
            .flat_map(|v| v.as_slice().iter().copied())
            .collect();
        copy_complex(&values, out, len)
    })
}

/// The `dim × count` synthesis matrix with the vectors as columns.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_synthesis(
    f: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let m = deref(f, "frame")?.0.synthesis_matrix().clone();
        write_out(out, boxed(FrmMatrix(m)))
    })
}

/// The frame operator `S = D·D*`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_operator(
    f: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let m = deref(f, "frame")?.0.frame_operator().clone();
        write_out(out, boxed(FrmMatrix(m)))
    })
}

/// Optimal frame bounds `A ≤ B`.
///
/// # Safety
/// `f` must be a live handle; `lower` and `upper` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_bounds(
    f: *const FrmFrame,
    lower: *mut f64,
    upper: *mut f64,
) -> FrmStatus {
    guard(|| {
        let b = deref(f, "frame")?.0.bounds();
        if lower.is_null() || upper.is_null() {
            return Err(null("output pointer"));
        }
        lower.write(b.lower);
        upper.write(b.upper);
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_classify(
    f: *const FrmFrame,
    out: *mut FrmFrameClass,
) -> FrmStatus {
    guard(|| write_out(out, deref(f, "frame")?.0.classify().into()))
}

/// Canonical dual frame `(S⁻¹ψ_k)`. Fails with `NotAFrame` if the family does
/// not span.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_dual(f: *const FrmFrame, out: *mut *mut FrmFrame) -> FrmStatus {
    guard(|| {
        let d = deref(f, "frame")?.0.dual()?;
        write_out(out, boxed(FrmFrame(d)))
    })
}

/// Parses the canonical JSON frame format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_from_json(
    text: *const c_char,
    out: *mut *mut FrmFrame,
) -> FrmStatus {
    guard(|| {
        let f = formats::parse_frame(str_in(text)?)?;
        write_out(out, boxed(FrmFrame(f)))
    })
}

/// Serializes to canonical JSON; release the result with [`frm_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_frame_to_json(f: *const FrmFrame, out: *mut *mut c_char) -> FrmStatus {
    guard(|| {
        let text = formats::serialize_frame(&deref(f, "frame")?.0);
        write_out(out, string_out(text))
    })
}

// ---------------------------------------------------------------------------
// Representations

/// Gram matrix with entries `⟨φ_m, ψ_j⟩` (rows indexed by `psi`).
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_gram(
    psi: *const FrmFrame,
    phi: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let g = framerep::frames::gram(&deref(psi, "psi")?.0, &deref(phi, "phi")?.0)?;
        write_out(out, boxed(FrmMatrix(g)))
    })
}

/// Matrix `C_Φ·O·D_Ψ` of the operator `op` from `C^{dim Ψ}` to `C^{dim Φ}`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_matrix_of_operator(
    op: *const FrmMatrix,
    phi: *const FrmFrame,
    psi: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let o = LinearOperator::new(deref(op, "operator")?.0.clone());
        let rep = matrix_of_operator(&o, &deref(phi, "phi")?.0, &deref(psi, "psi")?.0)?;
        write_out(out, boxed(FrmMatrix(rep.into_matrix())))
    })
}

/// Operator `D_Φ·M·C_Ψ` induced by the coefficient matrix `m`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_operator_of_matrix(
    m: *const FrmMatrix,
    phi: *const FrmFrame,
    psi: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let o = operator_of_matrix(
            &deref(m, "matrix")?.0,
            &deref(phi, "phi")?.0,
            &deref(psi, "psi")?.0,
        )?;
        write_out(out, boxed(FrmMatrix(o.into_matrix())))
    })
}

/// Frame multiplier `Σ m_k φ_k ψ_k*` for a symbol of `len` complex values.
///
/// # Safety
/// `symbol` must point to `2·len` readable doubles; handles must be live;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_multiplier(
    symbol: *const f64,
    len: usize,
    phi: *const FrmFrame,
    psi: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let m = complex_slice(symbol, len, "symbol")?;
        let o = frame_multiplier(&m, &deref(phi, "phi")?.0, &deref(psi, "psi")?.0)?;
        write_out(out, boxed(FrmMatrix(o.into_matrix())))
    })
}

/// Kernel `Σ M_kj φ_k ψ_j*` of the operator induced by `m`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn frm_kernel(
    m: *const FrmMatrix,
    phi: *const FrmFrame,
    psi: *const FrmFrame,
    out: *mut *mut FrmMatrix,
) -> FrmStatus {
    guard(|| {
        let k = kernel_of_representation(
            &deref(m, "matrix")?.0,
            &deref(phi, "phi")?.0,
            &deref(psi, "psi")?.0,
        )?;
        write_out(out, boxed(FrmMatrix(k)))
    })
}

// ---------------------------------------------------------------------------
// Solver

/// Options for [`frm_solve`]. Zero values select the defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FrmSolveOptions {
    /// Leading section size; 0 uses the full system.
    pub section_size: usize,
    /// Relative pseudoinverse cutoff; values `≤ 0` use the default.
    pub pseudoinverse_rel_tol: f64,
    /// Nonzero skips the projection of the right-hand side.
    pub no_project: c_int,
}

/// Scalar diagnostics of a solve.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FrmSolveInfo {
    pub residual_operator: f64,
    pub residual_matrix: f64,
    pub section_used: usize,
    pub conditioning_warning: c_int,
}

/// Solves `O f = g` through the frame `phi`. `g` and `solution` hold `n`
/// complex values (`2n` doubles) where `n` is the dimension of `phi`.
///
/// # Safety
/// `g` must point to `2n` readable doubles and `solution` to `2n` writable
/// doubles; `options` may be NULL; `info` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn frm_solve(
    op: *const FrmMatrix,
    g: *const f64,
    n: usize,
    phi: *const FrmFrame,
    options: *const FrmSolveOptions,
    solution: *mut f64,
    info: *mut FrmSolveInfo,
) -> FrmStatus {
    guard(|| {
        let o = LinearOperator::new(deref(op, "operator")?.0.clone());
        let g = ComplexVector::new(complex_slice(g, n, "g")?)?;
        let phi = &deref(phi, "phi")?.0;
        let opts = match options.as_ref() {
            None => SolveOptions::default(),
            Some(o) => SolveOptions {
                section_size: (o.section_size > 0).then_some(o.section_size),
                pseudoinverse_rel_tol: (o.pseudoinverse_rel_tol > 0.0)
                    .then_some(o.pseudoinverse_rel_tol),
                project_rhs: o.no_project == 0,
            },
        };
        let report = solve(&o, &g, phi, &opts)?;
        copy_complex(report.solution.as_slice(), solution, 2 * n)?;
        if !info.is_null() {
            info.write(FrmSolveInfo {
                residual_operator: report.residual_operator,
                residual_matrix: report.residual_matrix,
                section_used: report.section_used,
                conditioning_warning: c_int::from(report.conditioning_warning),
            });
        }
        Ok(())
    })
}
