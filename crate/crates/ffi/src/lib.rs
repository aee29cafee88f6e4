//! C ABI for `spinchain-core`.
//!
//! Every fallible call returns a [`SpinchainStatus`] and writes its result
//! through an out-pointer. Sweeps live behind an opaque handle released with
//! [`spinchain_sweep_free`]. Panics never cross the boundary.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinchain::chain::correlation_set;
use spinchain::sweep::{detect_critical_point, run_sweep, Axis, SweepResult, SweepSpec};
use spinchain::{measures_at, Error, Measure, ModelParams, QuadratureSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinchainStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidSeparation = 3,
    NonConvergence = 4,
    InvalidState = 5,
    OutOfRange = 6,
    InvalidSweep = 7,
    NoCriticalPoint = 8,
    Internal = 9,
}

impl From<&Error> for SpinchainStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::InvalidQuadrature(_) => SpinchainStatus::InvalidParameter,
            Error::InvalidSeparation { .. } | Error::SeparationTooLarge { .. } => SpinchainStatus::InvalidSeparation,
            Error::NonConvergence { .. } => SpinchainStatus::NonConvergence,
            Error::CorrelatorOutOfRange { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::InvalidState(_)
            | Error::SingularDenominator { .. }
            | Error::NonpositiveInformation { .. } => SpinchainStatus::InvalidState,
            Error::SizeOutOfRange { .. } | Error::IndexOutOfRange { .. } | Error::InvalidRepetitions => {
                SpinchainStatus::OutOfRange
            }
            Error::InvalidSweep(_) | Error::TooFewPoints { .. } | Error::NonUniformGrid | Error::WrongAxis { .. } => {
                SpinchainStatus::InvalidSweep
            }
            Error::FlatSeries { .. } => SpinchainStatus::NoCriticalPoint,
            Error::AllRowsFailed(inner) => SpinchainStatus::from(inner.as_ref()),
            Error::Eigen(_) => SpinchainStatus::Internal,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinchainAxis {
    J = 0,
    Gamma = 1,
    D = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinchainMeasure {
    Qfi = 0,
    L1 = 1,
    Rec = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpinchainParams {
    pub j: f64,
    pub gamma: f64,
    pub d: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpinchainCorrelations {
    pub r: u32,
    pub mz: f64,
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpinchainMeasures {
    pub qfi: f64,
    pub c_l1: f64,
    pub c_rec: f64,
}

/// One sweep row. `status` is non-`Ok` for flagged rows, whose correlator
/// and measure fields are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinchainRow {
    pub params: SpinchainParams,
    pub correlations: SpinchainCorrelations,
    pub measures: SpinchainMeasures,
    /// Derivatives with respect to the sweep axis.
    pub derivatives: SpinchainMeasures,
    pub status: SpinchainStatus,
}

/// Opaque sweep handle.
pub struct SpinchainSweep {
    spec: SweepSpec,
    result: SweepResult,
}

fn guard(f: impl FnOnce() -> SpinchainStatus) -> SpinchainStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(SpinchainStatus::Internal)
}

fn model(p: SpinchainParams) -> Result<ModelParams, SpinchainStatus> {
    ModelParams::new(p.j, p.gamma, p.d).map_err(|e| SpinchainStatus::from(&e))
}

fn measure(m: SpinchainMeasure) -> Measure {
    match m {
        SpinchainMeasure::Qfi => Measure::Qfi,
        SpinchainMeasure::L1 => Measure::L1,
        SpinchainMeasure::Rec => Measure::Rec,
    }
}

/// Thermodynamic-limit magnetization and correlators at separation `r`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinchain_correlations(
    params: SpinchainParams,
    r: u32,
    out: *mut SpinchainCorrelations,
) -> SpinchainStatus {
    guard(|| {
        if out.is_null() {
            return SpinchainStatus::NullPointer;
        }
        let p = match model(params) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match correlation_set(&p, r as usize, &QuadratureSpec::default()) {
            Ok(c) => {
                *out = SpinchainCorrelations { r, mz: c.mz, xx: c.xx, yy: c.yy, zz: c.zz };
                SpinchainStatus::Ok
            }
            Err(e) => SpinchainStatus::from(&e),
        }
    })
}

/// QFI, l1 coherence and relative entropy of coherence of the spin pair at
/// separation `r`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinchain_measures(params: SpinchainParams, r: u32, out: *mut SpinchainMeasures) -> SpinchainStatus {
    guard(|| {
        if out.is_null() {
            return SpinchainStatus::NullPointer;
        }
        let p = match model(params) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let result = correlation_set(&p, r as usize, &QuadratureSpec::default()).and_then(|c| measures_at(&c));
        match result {
            Ok(m) => {
                *out = SpinchainMeasures { qfi: m.qfi, c_l1: m.c_l1, c_rec: m.c_rec };
                SpinchainStatus::Ok
            }
            Err(e) => SpinchainStatus::from(&e),
        }
    })
}

/// Runs a sweep over `axis`; the axis field of `fixed` is ignored. On
/// success `*out` owns a handle that must be passed to
/// [`spinchain_sweep_free`].
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinchain_sweep_new(
    axis: SpinchainAxis,
    start: f64,
    stop: f64,
    step: f64,
    fixed: SpinchainParams,
    r: u32,
    out: *mut *mut SpinchainSweep,
) -> SpinchainStatus {
    guard(|| {
        if out.is_null() {
            return SpinchainStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let axis = match axis {
            SpinchainAxis::J => Axis::J,
            SpinchainAxis::Gamma => Axis::Gamma,
            SpinchainAxis::D => Axis::D,
        };
        // Zero the axis coupling so an out-of-range placeholder cannot fail.
        let mut base = fixed;
        match axis {
            Axis::J => base.j = 0.0,
            Axis::Gamma => base.gamma = 0.0,
            Axis::D => base.d = 0.0,
        }
        let p = match model(base) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let spec = SweepSpec::new(axis, start, stop, step, p, r as usize);
        match run_sweep(&spec) {
            Ok(result) => {
                *out = Box::into_raw(Box::new(SpinchainSweep { spec, result }));
                SpinchainStatus::Ok
            }
            Err(e) => SpinchainStatus::from(&e),
        }
    })
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle from [`spinchain_sweep_new`].
#[no_mangle]
pub unsafe extern "C" fn spinchain_sweep_len(sweep: *const SpinchainSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.result.len())
}

/// Copies row `index` into `*out`.
///
/// # Safety
/// `sweep` must be null or a live handle; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn spinchain_sweep_row(
    sweep: *const SpinchainSweep,
    index: usize,
    out: *mut SpinchainRow,
) -> SpinchainStatus {
    guard(|| {
        let (Some(s), false) = (sweep.as_ref(), out.is_null()) else {
            return SpinchainStatus::NullPointer;
        };
        let Some(row) = s.result.rows.get(index) else {
            return SpinchainStatus::OutOfRange;
        };
        let mut params = s.spec.fixed;
        match s.spec.axis {
            Axis::J => params.j = row.value,
            Axis::Gamma => params.gamma = row.value,
            Axis::D => params.d = row.value,
        }
        let deriv = |m| s.result.derivative(m)[index];
        let nan = f64::NAN;
        let (correlations, measures, status) = match &row.outcome {
            Ok(d) => (
                SpinchainCorrelations {
                    r: s.result.r as u32,
                    mz: d.corrs.mz,
                    xx: d.corrs.xx,
                    yy: d.corrs.yy,
                    zz: d.corrs.zz,
                },
                SpinchainMeasures { qfi: d.measures.qfi, c_l1: d.measures.c_l1, c_rec: d.measures.c_rec },
                SpinchainStatus::Ok,
            ),
            Err(e) => (
                SpinchainCorrelations { r: s.result.r as u32, mz: nan, xx: nan, yy: nan, zz: nan },
                SpinchainMeasures { qfi: nan, c_l1: nan, c_rec: nan },
                SpinchainStatus::from(e),
            ),
        };
        *out = SpinchainRow {
            params: SpinchainParams { j: params.j, gamma: params.gamma, d: params.d },
            correlations,
            measures,
            derivatives: SpinchainMeasures {
                qfi: deriv(Measure::Qfi),
                c_l1: deriv(Measure::L1),
                c_rec: deriv(Measure::Rec),
            },
            status,
        };
        SpinchainStatus::Ok
    })
}

/// Location of the strongest kink of `which` along a J sweep.
///
/// # Safety
/// `sweep` must be null or a live handle; `j_star` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn spinchain_sweep_critical_point(
    sweep: *const SpinchainSweep,
    which: SpinchainMeasure,
    j_star: *mut f64,
) -> SpinchainStatus {
    guard(|| {
        let (Some(s), false) = (sweep.as_ref(), j_star.is_null()) else {
            return SpinchainStatus::NullPointer;
        };
        match detect_critical_point(&s.result, measure(which)) {
            Ok(rep) => {
                *j_star = rep.j_star;
                SpinchainStatus::Ok
            }
            Err(e) => SpinchainStatus::from(&e),
        }
    })
}

/// Releases a sweep handle; null is ignored.
///
/// # Safety
/// `sweep` must be null or a handle from [`spinchain_sweep_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn spinchain_sweep_free(sweep: *mut SpinchainSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn spinchain_status_message(status: SpinchainStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        SpinchainStatus::Ok => c"ok",
        SpinchainStatus::NullPointer => c"null pointer argument",
        SpinchainStatus::InvalidParameter => c"invalid coupling or quadrature parameter",
        SpinchainStatus::InvalidSeparation => c"invalid spin separation",
        SpinchainStatus::NonConvergence => c"quadrature did not converge",
        SpinchainStatus::InvalidState => c"correlators do not form a valid state",
        SpinchainStatus::OutOfRange => c"index or size out of range",
        SpinchainStatus::InvalidSweep => c"invalid sweep specification",
        SpinchainStatus::NoCriticalPoint => c"no kink found along the sweep",
        SpinchainStatus::Internal => c"internal error",
    };
    msg.as_ptr()
}

/// Library version, NUL-terminated.
#[no_mangle]
pub extern "C" fn spinchain_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
