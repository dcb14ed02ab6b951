//! C ABI for the convstab library.
//!
//! Sequences and Toeplitz matrices are exposed as opaque handles; every
//! fallible call returns a [`ConvstabStatus`] and writes its result through
//! an out-pointer. Strings returned by this library must be released with
//! [`convstab_string_free`], handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use convstab::{AutocorrToeplitz, Error, SparseSequence, SupportSet};

/// Result codes for every fallible FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvstabStatus {
    Ok = 0,
    InvalidInput = 1,
    IndexOverflow = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
}

/// Opaque handle to a finitely supported complex sequence.
pub struct ConvstabSequence(SparseSequence);

/// Opaque handle to an autocorrelation Toeplitz matrix.
pub struct ConvstabToeplitz(AutocorrToeplitz);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(err: &Error) -> ConvstabStatus {
    let msg = CString::new(err.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
    match err {
        Error::IndexOverflow(_) => ConvstabStatus::IndexOverflow,
        Error::BudgetExceeded(_) => ConvstabStatus::BudgetExceeded,
        _ => ConvstabStatus::InvalidInput,
    }
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Message of the most recent error on this thread, or NULL when the last
/// call succeeded. Free with `convstab_string_free`.
#[no_mangle]
pub extern "C" fn convstab_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |msg| msg.clone().into_raw())
    })
}

/// Frees a string allocated by this library. NULL is a no-op.
///
/// # Safety
/// `s` must have been returned by a convstab function and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn convstab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ConvstabStatus> {
    if s.is_null() {
        return Err(ConvstabStatus::NullPointer);
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| ConvstabStatus::InvalidInput)
}

fn string_out(text: String) -> *mut c_char {
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses a sequence from its JSON form
/// `{"support":[i,...],"values":[[re,im],...]}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_sequence_from_json(
    json: *const c_char,
    out: *mut *mut ConvstabSequence,
) -> ConvstabStatus {
    if out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    let json = match read_str(json) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match SparseSequence::from_json(json) {
        Ok(seq) => {
            clear_error();
            *out = Box::into_raw(Box::new(ConvstabSequence(seq)));
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Serializes a sequence to JSON. Returns NULL on a NULL handle.
///
/// # Safety
/// `seq` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn convstab_sequence_to_json(seq: *const ConvstabSequence) -> *mut c_char {
    if seq.is_null() {
        return ptr::null_mut();
    }
    string_out((*seq).0.to_json())
}

/// ℓ²-norm of a sequence.
///
/// # Safety
/// `seq` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_sequence_norm(
    seq: *const ConvstabSequence,
    out: *mut f64,
) -> ConvstabStatus {
    if seq.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    *out = (*seq).0.norm();
    ConvstabStatus::Ok
}

/// Number of support points.
///
/// # Safety
/// `seq` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_sequence_sparsity(
    seq: *const ConvstabSequence,
    out: *mut usize,
) -> ConvstabStatus {
    if seq.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    *out = (*seq).0.sparsity();
    ConvstabStatus::Ok
}

/// Releases a sequence handle. NULL is a no-op.
///
/// # Safety
/// `seq` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn convstab_sequence_free(seq: *mut ConvstabSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Convolution of two sequences, (x*y)_j = Σ_i x_i y_{j−i}.
///
/// # Safety
/// `x` and `y` must be live handles, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_convolve(
    x: *const ConvstabSequence,
    y: *const ConvstabSequence,
    out: *mut *mut ConvstabSequence,
) -> ConvstabStatus {
    if x.is_null() || y.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match convstab::convolve(&(*x).0, &(*y).0) {
        Ok(conv) => {
            clear_error();
            *out = Box::into_raw(Box::new(ConvstabSequence(conv)));
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Builds the autocorrelation Toeplitz matrix of a dense generator given as
/// `n` interleaved (re, im) pairs, i.e. `2n` doubles.
///
/// # Safety
/// `interleaved` must point to `2n` readable doubles, `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_build(
    interleaved: *const f64,
    n: usize,
    out: *mut *mut ConvstabToeplitz,
) -> ConvstabStatus {
    if interleaved.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    let raw = std::slice::from_raw_parts(interleaved, 2 * n);
    let generator: Vec<num_complex::Complex64> = raw
        .chunks_exact(2)
        .map(|p| num_complex::Complex64::new(p[0], p[1]))
        .collect();
    match AutocorrToeplitz::from_generator(&generator) {
        Ok(t) => {
            clear_error();
            *out = Box::into_raw(Box::new(ConvstabToeplitz(t)));
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Smallest eigenvalue of the matrix.
///
/// # Safety
/// `t` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_smallest_eigenvalue(
    t: *const ConvstabToeplitz,
    out: *mut f64,
) -> ConvstabStatus {
    if t.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match (*t).0.smallest_eigenvalue() {
        Ok((lambda, _)) => {
            clear_error();
            *out = lambda;
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Determinant-based lower bound |det B| / (√n · S^{(n−1)/2}) on the
/// smallest eigenvalue.
///
/// # Safety
/// `t` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_det_eigen_lower_bound(
    t: *const ConvstabToeplitz,
    out: *mut f64,
) -> ConvstabStatus {
    if t.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    *out = (*t).0.det_eigen_lower_bound();
    ConvstabStatus::Ok
}

/// Minimum of the symbol over a uniform grid of `grid_size` points.
///
/// # Safety
/// `t` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_symbol_min(
    t: *const ConvstabToeplitz,
    grid_size: usize,
    out: *mut f64,
) -> ConvstabStatus {
    if t.is_null() || out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match (*t).0.symbol_min(grid_size) {
        Ok(min) => {
            clear_error();
            *out = min;
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Serializes the matrix as `{"n":int,"autocorr":[[re,im],...]}`.
///
/// # Safety
/// `t` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_to_json(t: *const ConvstabToeplitz) -> *mut c_char {
    if t.is_null() {
        return ptr::null_mut();
    }
    string_out((*t).0.to_json())
}

/// Releases a matrix handle. NULL is a no-op.
///
/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn convstab_toeplitz_free(t: *mut ConvstabToeplitz) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// β(s,f) = √min(s,f).
#[no_mangle]
pub extern "C" fn convstab_beta(s: usize, f: usize) -> f64 {
    convstab::beta(s, f)
}

/// Ambient dimension bound n(s,f) = (s+f−2)^{2(s+f−2)} + 1. Fails with
/// `IndexOverflow` when the value does not fit in 64 bits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn convstab_dimension_bound(
    s: usize,
    f: usize,
    out: *mut u64,
) -> ConvstabStatus {
    if out.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match convstab::dimension_bound(s, f) {
        Ok(n) => match u64::try_from(n) {
            Ok(v) => {
                clear_error();
                *out = v;
                ConvstabStatus::Ok
            }
            Err(_) => ConvstabStatus::IndexOverflow,
        },
        Err(e) => set_error(&e),
    }
}

/// Minimal-diameter Freiman compression of two supports given as JSON
/// integer arrays. On success writes the result JSON
/// `{"image":[...],"diameter":int,"bound_n":int,"within_bound":bool}`.
///
/// # Safety
/// `i_json` and `j_json` must be valid NUL-terminated strings, `out_json`
/// a valid pointer; the returned string is freed by `convstab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn convstab_compress_support(
    i_json: *const c_char,
    j_json: *const c_char,
    out_json: *mut *mut c_char,
) -> ConvstabStatus {
    if out_json.is_null() {
        return ConvstabStatus::NullPointer;
    }
    let parse = |raw: *const c_char| -> Result<SupportSet, ConvstabStatus> {
        let text = read_str(raw)?;
        let elements: Vec<i64> =
            serde_json::from_str(text).map_err(|_| ConvstabStatus::InvalidInput)?;
        SupportSet::new(elements).map_err(|e| set_error(&e))
    };
    let i = match parse(i_json) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let j = match parse(j_json) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match convstab::compress_support(&i, &j) {
        Ok(result) => {
            clear_error();
            *out_json = string_out(result.to_json());
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Alternating-minimization upper bound on α(s,f) at ambient dimension
/// `n_eff`. Writes the report JSON produced by the core estimator.
///
/// # Safety
/// `out_json` must be a valid pointer; free the string with
/// `convstab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn convstab_alpha_upper(
    s: usize,
    f: usize,
    n_eff: usize,
    restarts: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> ConvstabStatus {
    if out_json.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match convstab::alpha_upper_alternating(s, f, n_eff, restarts, seed) {
        Ok(report) => {
            clear_error();
            *out_json = string_out(report.to_json());
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Determinant-chain lower-bound estimate at dimension `n_eff` with
/// `budget` multi-start restarts. Writes the estimate JSON.
///
/// # Safety
/// `out_json` must be a valid pointer; free the string with
/// `convstab_string_free`.
#[no_mangle]
pub unsafe extern "C" fn convstab_alpha_lower(
    n_eff: usize,
    budget: usize,
    out_json: *mut *mut c_char,
) -> ConvstabStatus {
    if out_json.is_null() {
        return ConvstabStatus::NullPointer;
    }
    match convstab::alpha_lower_detbound(n_eff, budget) {
        Ok(estimate) => {
            clear_error();
            *out_json = string_out(estimate.to_json());
            ConvstabStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}
