//! C ABI for the interferometer-synthesis library: opaque matrix and circuit
//! handles, status codes, and a thread-local last-error message. Every entry
//! point catches panics, never unwinds across the boundary, and writes
//! outputs only on LM_STATUS_OK.

use lumesh::{
    decompose_bwc, decompose_clements, decompose_mbs3, decompose_reck,
    distance_up_to_global_phase, haar_random_unitary, success_probability, usd_unitary, Circuit,
    ComplexMatrix, Error, UnitaryMatrix, UsdParams,
};
use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every fallible call; LM_STATUS_OK means outputs were written.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument violated a documented precondition.
    InvalidArgument = 2,
    /// Matrix or circuit dimensions do not fit the operation.
    DimensionError = 3,
    /// The matrix is not unitary within tolerance.
    NotUnitary = 4,
    /// Text failed to parse as matrix or circuit JSON.
    ParseError = 5,
    /// A row, column, or mode index is out of range.
    IndexError = 6,
    /// Unexpected internal failure (including caught panics).
    InternalError = 7,
}

/// Decomposition scheme selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmScheme {
    /// Triangular mesh of two-mode blocks.
    Reck = 0,
    /// Rectangular mesh of two-mode blocks.
    Clements = 1,
    /// Four identical fixed blocks with phase masks (3 modes only).
    Mbs3 = 2,
    /// Multiport-beamsplitter mesh with phase masks (3+ modes).
    Bwc = 3,
}

/// Component totals of a circuit.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LmComponentCounts {
    /// Standalone 50:50 beamsplitters.
    pub n_bs: usize,
    /// Tunable phase shifters (standalone plus non-trivial mask entries).
    pub n_ps: usize,
    /// Phase-mask layers.
    pub n_phase_masks: usize,
    /// Fixed multiport blocks.
    pub n_fixed_mbs: usize,
}

/// Opaque square complex matrix handle.
pub struct LmMatrix(ComplexMatrix);

/// Opaque circuit handle.
pub struct LmCircuit(Circuit);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> LmStatus {
    match err {
        Error::Parse(_) => LmStatus::ParseError,
        Error::Dimension(_) => LmStatus::DimensionError,
        Error::Index(_) => LmStatus::IndexError,
        Error::NotUnitary { .. } => LmStatus::NotUnitary,
        Error::InvalidArgument(_) => LmStatus::InvalidArgument,
        Error::Structure(_) => LmStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> LmStatus {
    set_error(&err.to_string());
    status_of(err)
}

fn fail_with(status: LmStatus, message: &str) -> LmStatus {
    set_error(message);
    status
}

/// Runs a closure, converting panics into LM_STATUS_INTERNAL_ERROR.
fn guarded(f: impl FnOnce() -> LmStatus) -> LmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail_with(LmStatus::InternalError, "internal panic caught at the ABI boundary"),
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) {
    unsafe { out.write(value) };
}

/// Returns the error message of the most recent failing call on this thread.
///
/// The pointer stays valid until the next failing call on the same thread;
/// do not free it. Returns an empty string if nothing failed yet.
#[no_mangle]
pub extern "C" fn lm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Frees a string returned by a *_to_json function. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn lm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Frees a matrix handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_free(m: *mut LmMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Frees a circuit handle. NULL is allowed.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_free(c: *mut LmCircuit) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Builds an n x n matrix from row-major real and imaginary parts.
///
/// `re` must point to n*n doubles; `im` may be NULL for a real matrix.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_new(
    n: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut LmMatrix,
) -> LmStatus {
    guarded(|| {
        if out.is_null() || re.is_null() {
            return fail_with(LmStatus::NullPointer, "re and out must be non-null");
        }
        if n == 0 {
            return fail_with(LmStatus::DimensionError, "matrix dimension must be at least 1");
        }
        let len = n * n;
        let res = unsafe { std::slice::from_raw_parts(re, len) };
        let ims = if im.is_null() {
            None
        } else {
            Some(unsafe { std::slice::from_raw_parts(im, len) })
        };
        let data: Vec<Complex64> = (0..len)
            .map(|k| Complex64::new(res[k], ims.map_or(0.0, |s| s[k])))
            .collect();
        match ComplexMatrix::new(n, n, data) {
            Ok(m) => {
                unsafe { write_out(out, Box::into_raw(Box::new(LmMatrix(m)))) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Builds the n x n identity matrix.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_identity(n: usize, out: *mut *mut LmMatrix) -> LmStatus {
    guarded(|| {
        if out.is_null() {
            return fail_with(LmStatus::NullPointer, "out must be non-null");
        }
        if n == 0 {
            return fail_with(LmStatus::DimensionError, "matrix dimension must be at least 1");
        }
        unsafe { write_out(out, Box::into_raw(Box::new(LmMatrix(ComplexMatrix::identity(n))))) };
        LmStatus::Ok
    })
}

/// Draws an n x n Haar-random unitary from the given seed.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_haar_random(
    n: usize,
    seed: u64,
    out: *mut *mut LmMatrix,
) -> LmStatus {
    guarded(|| {
        if out.is_null() {
            return fail_with(LmStatus::NullPointer, "out must be non-null");
        }
        match haar_random_unitary(n, seed) {
            Ok(u) => {
                unsafe {
                    write_out(out, Box::into_raw(Box::new(LmMatrix(u.into_inner()))));
                }
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Parses a matrix from its JSON representation.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_from_json(
    json: *const c_char,
    out: *mut *mut LmMatrix,
) -> LmStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "json and out must be non-null");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail_with(LmStatus::ParseError, "json must be valid UTF-8"),
        };
        match ComplexMatrix::from_json(text) {
            Ok(m) => {
                unsafe { write_out(out, Box::into_raw(Box::new(LmMatrix(m)))) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Serializes a matrix to JSON. Free the string with lm_string_free.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_to_json(
    m: *const LmMatrix,
    out: *mut *mut c_char,
) -> LmStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "matrix and out must be non-null");
        }
        let matrix = unsafe { &(*m).0 };
        match matrix.to_json() {
            Ok(json) => match CString::new(json) {
                Ok(c) => {
                    unsafe { write_out(out, c.into_raw()) };
                    LmStatus::Ok
                }
                Err(_) => fail_with(LmStatus::InternalError, "serialized JSON contained NUL"),
            },
            Err(e) => fail(&e),
        }
    })
}

/// Writes the matrix dimension to `out`.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_dim(m: *const LmMatrix, out: *mut usize) -> LmStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "matrix and out must be non-null");
        }
        unsafe { write_out(out, (*m).0.rows()) };
        LmStatus::Ok
    })
}

/// Reads one entry (0-based row and column) into out_re/out_im.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_get(
    m: *const LmMatrix,
    row: usize,
    col: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LmStatus {
    guarded(|| {
        if m.is_null() || out_re.is_null() || out_im.is_null() {
            return fail_with(LmStatus::NullPointer, "matrix and outputs must be non-null");
        }
        let matrix = unsafe { &(*m).0 };
        if row >= matrix.rows() || col >= matrix.cols() {
            return fail_with(
                LmStatus::IndexError,
                "entry index outside the matrix",
            );
        }
        let z = matrix.get(row, col);
        unsafe {
            write_out(out_re, z.re);
            write_out(out_im, z.im);
        }
        LmStatus::Ok
    })
}

/// Computes the max-entry distance between two same-size matrices after
/// optimal global-phase alignment. `out_phase` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn lm_matrix_distance(
    u: *const LmMatrix,
    v: *const LmMatrix,
    out_distance: *mut f64,
    out_phase: *mut f64,
) -> LmStatus {
    guarded(|| {
        if u.is_null() || v.is_null() || out_distance.is_null() {
            return fail_with(LmStatus::NullPointer, "u, v, and out_distance must be non-null");
        }
        match distance_up_to_global_phase(unsafe { &(*u).0 }, unsafe { &(*v).0 }) {
            Ok(eq) => {
                unsafe { write_out(out_distance, eq.distance) };
                if !out_phase.is_null() {
                    unsafe { write_out(out_phase, eq.aligning_phase) };
                }
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Decomposes a unitary matrix into a circuit under the chosen scheme.
#[no_mangle]
pub unsafe extern "C" fn lm_decompose(
    m: *const LmMatrix,
    scheme: LmScheme,
    out: *mut *mut LmCircuit,
) -> LmStatus {
    guarded(|| {
        if m.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "matrix and out must be non-null");
        }
        let unitary = match UnitaryMatrix::new(unsafe { (*m).0.clone() }) {
            Ok(u) => u,
            Err(e) => return fail(&e),
        };
        let result = match scheme {
            LmScheme::Reck => decompose_reck(&unitary),
            LmScheme::Clements => decompose_clements(&unitary),
            LmScheme::Mbs3 => decompose_mbs3(&unitary).map(|(_, r)| r),
            LmScheme::Bwc => decompose_bwc(&unitary),
        };
        match result {
            Ok(r) => {
                unsafe { write_out(out, Box::into_raw(Box::new(LmCircuit(r.circuit)))) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Multiplies out a circuit into its matrix.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_evaluate(
    c: *const LmCircuit,
    out: *mut *mut LmMatrix,
) -> LmStatus {
    guarded(|| {
        if c.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "circuit and out must be non-null");
        }
        let m = unsafe { (*c).0.evaluate() };
        unsafe { write_out(out, Box::into_raw(Box::new(LmMatrix(m.into_inner())))) };
        LmStatus::Ok
    })
}

/// Parses a circuit from its JSON representation.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_from_json(
    json: *const c_char,
    out: *mut *mut LmCircuit,
) -> LmStatus {
    guarded(|| {
        if json.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "json and out must be non-null");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return fail_with(LmStatus::ParseError, "json must be valid UTF-8"),
        };
        match Circuit::from_json(text) {
            Ok(c2) => {
                unsafe { write_out(out, Box::into_raw(Box::new(LmCircuit(c2)))) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Serializes a circuit to JSON. Free the string with lm_string_free.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_to_json(
    c: *const LmCircuit,
    out: *mut *mut c_char,
) -> LmStatus {
    guarded(|| {
        if c.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "circuit and out must be non-null");
        }
        match unsafe { (*c).0.to_json() } {
            Ok(json) => match CString::new(json) {
                Ok(s) => {
                    unsafe { write_out(out, s.into_raw()) };
                    LmStatus::Ok
                }
                Err(_) => fail_with(LmStatus::InternalError, "serialized JSON contained NUL"),
            },
            Err(e) => fail(&e),
        }
    })
}

/// Writes the circuit's mode count to `out`.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_width(c: *const LmCircuit, out: *mut usize) -> LmStatus {
    guarded(|| {
        if c.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "circuit and out must be non-null");
        }
        unsafe { write_out(out, (*c).0.width()) };
        LmStatus::Ok
    })
}

/// Tallies the circuit's components into `out`.
#[no_mangle]
pub unsafe extern "C" fn lm_circuit_counts(
    c: *const LmCircuit,
    out: *mut LmComponentCounts,
) -> LmStatus {
    guarded(|| {
        if c.is_null() || out.is_null() {
            return fail_with(LmStatus::NullPointer, "circuit and out must be non-null");
        }
        let report = unsafe { (*c).0.count_components("circuit") };
        unsafe {
            write_out(
                out,
                LmComponentCounts {
                    n_bs: report.n_bs,
                    n_ps: report.n_ps,
                    n_phase_masks: report.n_phase_masks,
                    n_fixed_mbs: report.n_fixed_mbs,
                },
            );
        }
        LmStatus::Ok
    })
}

/// Builds the 3x3 two-state discrimination unitary for overlap ratio delta
/// in (0, 1).
#[no_mangle]
pub unsafe extern "C" fn lm_usd_unitary(delta: f64, out: *mut *mut LmMatrix) -> LmStatus {
    guarded(|| {
        if out.is_null() {
            return fail_with(LmStatus::NullPointer, "out must be non-null");
        }
        match UsdParams::from_delta(delta) {
            Ok(p) => {
                let u = usd_unitary(p);
                unsafe { write_out(out, Box::into_raw(Box::new(LmMatrix(u.into_inner())))) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Writes the discrimination success probability (2 b^2) for delta in
/// (0, 1) to `out`.
#[no_mangle]
pub unsafe extern "C" fn lm_usd_success_probability(delta: f64, out: *mut f64) -> LmStatus {
    guarded(|| {
        if out.is_null() {
            return fail_with(LmStatus::NullPointer, "out must be non-null");
        }
        match UsdParams::from_delta(delta) {
            Ok(p) => {
                unsafe { write_out(out, success_probability(p)) };
                LmStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}
