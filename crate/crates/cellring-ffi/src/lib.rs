//! C ABI for the cellring toolkit: opaque parameter handles, status codes,
//! and flat-buffer entry points for simulation, complexity, and stability.
//!
//! All functions returning [`CellringStatus`] store a human-readable message
//! for the most recent failure in thread-local storage; fetch it with
//! [`cellring_last_error`]. Buffers are caller-allocated; sizes are
//! documented per function.

use cellring::complexity::{complexity_spectrum, kc_single};
use cellring::dynamics::{simulate, Convention, ModelParams, StateVector};
use cellring::error::Error;
use cellring::stability::{region_s_membership, spectral_radius, two_cell_report, Classification};
use libc::{c_char, c_int};
use ndarray::Array2;
use std::cell::RefCell;
use std::ffi::CString;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&ch| ch != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellringStatus {
    /// Success.
    Ok = 0,
    /// A pointer was null or a parameter violated its bound.
    InvalidArgument = 1,
    /// The orbit left the open unit interval; see `cellring_last_error`.
    RangeEscape = 2,
    /// An iterative routine exhausted its budget.
    NotConverged = 3,
    /// An eigenvalue or linear-algebra routine failed.
    NumericalFailure = 4,
}

fn status_of(err: &Error) -> CellringStatus {
    match err {
        Error::RangeEscape { .. } | Error::RangeEscapeAt { .. } | Error::BoundaryEscape { .. } => {
            CellringStatus::RangeEscape
        }
        Error::NotConverged { .. } => CellringStatus::NotConverged,
        Error::NumericalFailure(_) | Error::SingularJacobian | Error::SingularEntry { .. } => {
            CellringStatus::NumericalFailure
        }
        _ => CellringStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> CellringStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

fn invalid(msg: &str) -> CellringStatus {
    set_last_error(msg);
    CellringStatus::InvalidArgument
}

/// Coupling-weight placement, mirroring the core crate's two conventions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellringConvention {
    /// Logistic term weighted by `1 - c`, inflow by `c`.
    TwoCell = 0,
    /// Logistic term weighted by `c`, inflow by `1 - c`.
    Ring = 1,
}

impl From<CellringConvention> for Convention {
    fn from(c: CellringConvention) -> Convention {
        match c {
            CellringConvention::TwoCell => Convention::TwoCell,
            CellringConvention::Ring => Convention::Ring,
        }
    }
}

/// Opaque handle holding validated model parameters.
pub struct CellringParams {
    inner: ModelParams,
}

/// Two-cell stability report. `classification` is 0 = asymptotically stable,
/// 1 = unstable, 2 = indeterminate; `in_region_s` is 0 or 1.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CellringStabilityReport {
    pub eigen_max: f64,
    pub eigen_min: f64,
    pub margin: f64,
    pub spectral_radius: f64,
    pub infinity_norm: f64,
    pub classification: c_int,
    pub in_region_s: u8,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cellring_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the most recent error message on this thread into `buf` (truncated to
/// `cap - 1` bytes, always NUL-terminated when `cap > 0`). Returns the full
/// message length in bytes, excluding the NUL.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be null with `cap = 0`.
#[no_mangle]
pub unsafe extern "C" fn cellring_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Create two-cell parameters with scalar coupling `c` and affinities
/// `(p, 1 - p)`. On success writes a heap handle to `out`; free it with
/// [`cellring_params_free`].
///
/// # Safety
/// `out` must be a valid pointer to a `*mut CellringParams` slot.
#[no_mangle]
pub unsafe extern "C" fn cellring_params_two_cell(
    r: f64,
    c: f64,
    p: f64,
    out: *mut *mut CellringParams,
) -> CellringStatus {
    if out.is_null() {
        return invalid("out pointer is null");
    }
    match ModelParams::two_cell(r, c, p) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CellringParams { inner }));
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Create N-cell ring parameters from per-cell coupling and affinity arrays
/// of length `n`. On success writes a heap handle to `out`.
///
/// # Safety
/// `coupling` and `affinities` must point to `n` readable doubles; `out`
/// must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cellring_params_ring(
    r: f64,
    coupling: *const f64,
    affinities: *const f64,
    n: usize,
    out: *mut *mut CellringParams,
) -> CellringStatus {
    if out.is_null() || coupling.is_null() || affinities.is_null() {
        return invalid("null pointer argument");
    }
    let coupling = std::slice::from_raw_parts(coupling, n).to_vec();
    let affinities = std::slice::from_raw_parts(affinities, n).to_vec();
    match ModelParams::new(r, coupling, affinities) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(CellringParams { inner }));
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Number of cells behind a handle (0 for null).
///
/// # Safety
/// `params` must be null or a live handle from a constructor.
#[no_mangle]
pub unsafe extern "C" fn cellring_params_n_cells(params: *const CellringParams) -> usize {
    if params.is_null() {
        0
    } else {
        (*params).inner.n_cells()
    }
}

/// Release a parameter handle. Null is a no-op.
///
/// # Safety
/// `params` must be null or a handle previously returned by a constructor,
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cellring_params_free(params: *mut CellringParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Iterate the map `n_total` times from `x0`, discard the first
/// `n_transient` iterates, and write the remaining states row-major into
/// `out_states` (`(n_total - n_transient) * n_cells` doubles). On a range
/// escape, returns `RangeEscape` and stores the failing step in
/// `out_escape_step` when non-null.
///
/// # Safety
/// `x0` must hold `n_cells` doubles; `out_states` must have room for
/// `(n_total - n_transient) * n_cells` doubles.
#[no_mangle]
pub unsafe extern "C" fn cellring_simulate(
    params: *const CellringParams,
    convention: CellringConvention,
    x0: *const f64,
    n_total: usize,
    n_transient: usize,
    out_states: *mut f64,
    out_escape_step: *mut usize,
) -> CellringStatus {
    if params.is_null() || x0.is_null() || out_states.is_null() {
        return invalid("null pointer argument");
    }
    let p = &(*params).inner;
    let n = p.n_cells();
    let x0 = match StateVector::new(std::slice::from_raw_parts(x0, n).to_vec()) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    match simulate(p, convention.into(), &x0, n_total, n_transient) {
        Ok(traj) => {
            let out = std::slice::from_raw_parts_mut(out_states, traj.states.len() * n);
            for (i, state) in traj.states.iter().enumerate() {
                out[i * n..(i + 1) * n].copy_from_slice(state.components());
            }
            CellringStatus::Ok
        }
        Err(e) => {
            if let Error::RangeEscapeAt { step, .. } = e {
                if !out_escape_step.is_null() {
                    *out_escape_step = step;
                }
            }
            fail(&e)
        }
    }
}

/// Normalized complexity of a series binarized at its mean.
///
/// # Safety
/// `series` must hold `len` readable doubles; `out_kc` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cellring_kc_single(
    series: *const f64,
    len: usize,
    out_kc: *mut f64,
) -> CellringStatus {
    if series.is_null() || out_kc.is_null() {
        return invalid("null pointer argument");
    }
    match kc_single(std::slice::from_raw_parts(series, len)) {
        Ok(v) => {
            *out_kc = v;
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Full complexity spectrum of a series. `out_values` receives `len`
/// doubles (one per threshold); `out_max` / `out_max_index` receive the
/// spectrum maximum and its first position and may be null.
///
/// # Safety
/// `series` must hold `len` doubles; `out_values` must have room for `len`.
#[no_mangle]
pub unsafe extern "C" fn cellring_spectrum(
    series: *const f64,
    len: usize,
    out_values: *mut f64,
    out_max: *mut f64,
    out_max_index: *mut usize,
) -> CellringStatus {
    if series.is_null() || out_values.is_null() {
        return invalid("null pointer argument");
    }
    match complexity_spectrum(std::slice::from_raw_parts(series, len)) {
        Ok(spec) => {
            std::slice::from_raw_parts_mut(out_values, len).copy_from_slice(&spec.values);
            if !out_max.is_null() {
                *out_max = spec.max_value;
            }
            if !out_max_index.is_null() {
                *out_max_index = spec.max_index;
            }
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Two-cell linearization report at the equilibrium `(x, y)`.
///
/// # Safety
/// `params` must be a live two-cell handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cellring_two_cell_stability(
    params: *const CellringParams,
    x: f64,
    y: f64,
    out: *mut CellringStabilityReport,
) -> CellringStatus {
    if params.is_null() || out.is_null() {
        return invalid("null pointer argument");
    }
    match two_cell_report((x, y), &(*params).inner) {
        Ok(rep) => {
            *out = CellringStabilityReport {
                eigen_max: rep.eigen_max,
                eigen_min: rep.eigen_min,
                margin: rep.margin,
                spectral_radius: rep.spectral_radius,
                infinity_norm: rep.infinity_norm,
                classification: match rep.classification {
                    Classification::AsymptoticallyStable => 0,
                    Classification::Unstable => 1,
                    Classification::Indeterminate => 2,
                },
                in_region_s: u8::from(rep.in_region_s),
            };
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Membership of `eq` (length `n_cells`) in the coupling-independent
/// stability region S; writes 0/1 to `out_member`.
///
/// # Safety
/// `eq` must hold `n_cells` doubles; `out_member` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cellring_region_s_membership(
    params: *const CellringParams,
    eq: *const f64,
    out_member: *mut u8,
) -> CellringStatus {
    if params.is_null() || eq.is_null() || out_member.is_null() {
        return invalid("null pointer argument");
    }
    let p = &(*params).inner;
    let eq = std::slice::from_raw_parts(eq, p.n_cells());
    *out_member = u8::from(region_s_membership(eq, p));
    CellringStatus::Ok
}

/// Spectral radius of a dense row-major `n x n` matrix.
///
/// # Safety
/// `matrix` must hold `n * n` readable doubles; `out_rho` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cellring_spectral_radius(
    matrix: *const f64,
    n: usize,
    out_rho: *mut f64,
) -> CellringStatus {
    if matrix.is_null() || out_rho.is_null() {
        return invalid("null pointer argument");
    }
    let data = std::slice::from_raw_parts(matrix, n * n).to_vec();
    let m = match Array2::from_shape_vec((n, n), data) {
        Ok(m) => m,
        Err(e) => return invalid(&format!("bad matrix shape: {e}")),
    };
    match spectral_radius(&m) {
        Ok(rho) => {
            *out_rho = rho;
            CellringStatus::Ok
        }
        Err(e) => fail(&e),
    }
}
