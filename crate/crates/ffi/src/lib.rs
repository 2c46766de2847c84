//! C ABI for `levcool`.
//!
//! Parameters live behind an opaque [`LcParams`] handle created by
//! [`lc_params_new`] or [`lc_params_from_config`] and released with
//! [`lc_params_free`]. Every fallible call returns an [`LcStatus`]; on failure
//! [`lc_last_error_message`] describes the most recent error on the calling
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use levcool::config::ModelSpec;
use levcool::cooling::{self, DetuningMode};
use levcool::lyapunov;
use levcool::params;
use levcool::reduction;
use levcool::response;
use levcool::{Error, NormalizedParams};

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ConfigError = 3,
    NotCooling = 4,
    NoCoolingWindow = 5,
    Unstable = 6,
    NumericFailure = 7,
    IoError = 8,
    Panic = 9,
}

/// Stability criterion selector for [`lc_stability`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcCriterion {
    Single = 0,
    SingleOptimal = 1,
    CoupledEffective = 2,
    CoupledBound = 3,
}

/// Detuning optimizer selector for [`lc_optimal_detuning`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcDetuningMode {
    ClosedForm = 0,
    Numeric = 1,
}

/// Model parameters in units of the trap frequency.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcParamValues {
    pub detuning2: f64,
    pub detuning3: f64,
    pub kappa: f64,
    pub kappa3: f64,
    pub tunneling: f64,
    pub coupling: f64,
    pub gamma: f64,
    pub gamma_sc: f64,
    pub n_th: f64,
}

/// Opaque parameter handle.
pub struct LcParams {
    inner: NormalizedParams,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcCoolingReport {
    pub a_minus: f64,
    pub a_plus: f64,
    pub gamma_opt: f64,
    pub spring_shift: f64,
    /// Quantum-noise occupancy; NaN when not cooling.
    pub n_q: f64,
    /// Recoil occupancy; NaN when not cooling.
    pub n_c: f64,
    /// Total occupancy; NaN when not cooling.
    pub n_f: f64,
    pub cooling: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcEffectiveParams {
    pub eta: f64,
    pub coupling_eff: f64,
    pub kappa_eff: f64,
    pub detuning_eff: f64,
    /// All validity diagnostics of the reduction hold.
    pub regime_ok: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcStabilityVerdict {
    pub stable: bool,
    /// Positive when stable, `+inf` when the criterion places no bound.
    pub margin: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcOccupancy {
    pub n_phonon: f64,
    pub max_real_eigenvalue: f64,
    pub residual: f64,
}

impl From<LcParamValues> for NormalizedParams {
    fn from(v: LcParamValues) -> Self {
        NormalizedParams {
            detuning2: v.detuning2,
            detuning3: v.detuning3,
            kappa: v.kappa,
            kappa3: v.kappa3,
            tunneling: v.tunneling,
            coupling: v.coupling,
            gamma: v.gamma,
            gamma_sc: v.gamma_sc,
            n_th: v.n_th,
        }
    }
}

impl From<NormalizedParams> for LcParamValues {
    fn from(p: NormalizedParams) -> Self {
        LcParamValues {
            detuning2: p.detuning2,
            detuning3: p.detuning3,
            kappa: p.kappa,
            kappa3: p.kappa3,
            tunneling: p.tunneling,
            coupling: p.coupling,
            gamma: p.gamma,
            gamma_sc: p.gamma_sc,
            n_th: p.n_th,
        }
    }
}

struct Failure(LcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Validation(_) => LcStatus::InvalidArgument,
            Error::Config { .. } | Error::UnknownKey(_) => LcStatus::ConfigError,
            Error::NotCooling { .. } => LcStatus::NotCooling,
            Error::NoCoolingWindow => LcStatus::NoCoolingWindow,
            Error::Unstable { .. } => LcStatus::Unstable,
            Error::Io { .. } | Error::Csv { .. } => LcStatus::IoError,
            _ => LcStatus::NumericFailure,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(LcStatus::NullPointer, format!("`{what}` is null"))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LcStatus::Panic
        }
    }
}

unsafe fn params<'a>(p: *const LcParams) -> Result<&'a NormalizedParams, Failure> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null("params"))
}

unsafe fn out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(LcStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

fn finite(x: f64, what: &str) -> Result<(), Failure> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Failure(LcStatus::InvalidArgument, format!("`{what}` must be finite")))
    }
}

fn into_handle(p: NormalizedParams, handle: &mut *mut LcParams) -> Result<(), Failure> {
    p.validate()?;
    *handle = Box::into_raw(Box::new(LcParams { inner: p }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lc_version() -> *const c_char {
    VERSION.as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn lc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Validates `values` and stores a new handle in `*out`.
///
/// # Safety
/// `values` must point to a readable `LcParamValues`; `out` to a writable
/// handle slot.
#[no_mangle]
pub unsafe extern "C" fn lc_params_new(values: *const LcParamValues, out: *mut *mut LcParams) -> LcStatus {
    guard(|| {
        let v = *values.as_ref().ok_or_else(|| null("values"))?;
        into_handle(v.into(), self::out(out, "out")?)
    })
}

/// Parses a model description in the CLI config format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn lc_params_from_config(text: *const c_char, out: *mut *mut LcParams) -> LcStatus {
    guard(|| {
        let spec = ModelSpec::parse(c_str(text, "text")?)?;
        into_handle(spec.resolve()?, self::out(out, "out")?)
    })
}

/// Reads a model description from a config file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn lc_params_from_config_file(path: *const c_char, out: *mut *mut LcParams) -> LcStatus {
    guard(|| {
        let spec = ModelSpec::from_file(Path::new(c_str(path, "path")?))?;
        into_handle(spec.resolve()?, self::out(out, "out")?)
    })
}

/// Copies the parameter values out of a handle.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_params_get(params: *const LcParams, out: *mut LcParamValues) -> LcStatus {
    guard(|| {
        *self::out(out, "out")? = (*self::params(params)?).into();
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `params` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lc_params_free(params: *mut LcParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Force-noise spectral density at frequency `omega`.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_spectral_density(params: *const LcParams, omega: f64, out: *mut f64) -> LcStatus {
    guard(|| {
        finite(omega, "omega")?;
        *self::out(out, "out")? = response::s_ff(omega, self::params(params)?);
        Ok(())
    })
}

/// Evaluates the spectral density at `n` frequencies.
///
/// # Safety
/// `omega` must be readable and `out` writable for `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn lc_spectrum(params: *const LcParams, omega: *const f64, n: usize, out: *mut f64) -> LcStatus {
    guard(|| {
        let p = self::params(params)?;
        if n == 0 {
            return Ok(());
        }
        if omega.is_null() {
            return Err(null("omega"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let w = std::slice::from_raw_parts(omega, n);
        let s = std::slice::from_raw_parts_mut(out, n);
        for (wi, si) in w.iter().zip(s.iter_mut()) {
            finite(*wi, "omega")?;
            *si = response::s_ff(*wi, p);
        }
        Ok(())
    })
}

/// Rates and occupancies. Fills `out` and returns `LC_STATUS_OK` even when the
/// net damping is not positive; check `out->cooling`.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_cooling_report(params: *const LcParams, out: *mut LcCoolingReport) -> LcStatus {
    guard(|| {
        let r = cooling::cooling_report(self::params(params)?);
        *self::out(out, "out")? = LcCoolingReport {
            a_minus: r.a_minus,
            a_plus: r.a_plus,
            gamma_opt: r.gamma_opt,
            spring_shift: r.spring_shift,
            n_q: r.n_q,
            n_c: r.n_c,
            n_f: r.n_f,
            cooling: r.is_cooling(),
        };
        Ok(())
    })
}

/// Cooling-mode detuning minimizing the final occupancy.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_optimal_detuning(params: *const LcParams, mode: LcDetuningMode, out: *mut f64) -> LcStatus {
    guard(|| {
        let mode = match mode {
            LcDetuningMode::ClosedForm => DetuningMode::ClosedForm,
            LcDetuningMode::Numeric => DetuningMode::Numeric,
        };
        *self::out(out, "out")? = cooling::optimal_detuning(self::params(params)?, mode)?;
        Ok(())
    })
}

/// Cooling-mode detuning maximizing the net damping.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_max_damping_detuning(params: *const LcParams, out: *mut f64) -> LcStatus {
    guard(|| {
        *self::out(out, "out")? = cooling::max_damping_detuning(self::params(params)?)?;
        Ok(())
    })
}

/// Parameters of the reduced single-mode model.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_effective_params(params: *const LcParams, out: *mut LcEffectiveParams) -> LcStatus {
    guard(|| {
        let e = reduction::effective_params(self::params(params)?);
        *self::out(out, "out")? = LcEffectiveParams {
            eta: e.eta,
            coupling_eff: e.coupling_eff,
            kappa_eff: e.kappa_eff,
            detuning_eff: e.detuning_eff,
            regime_ok: e.regime_ok(),
        };
        Ok(())
    })
}

/// Closed-form stability verdict under the selected criterion.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_stability(
    params: *const LcParams,
    criterion: LcCriterion,
    out: *mut LcStabilityVerdict,
) -> LcStatus {
    guard(|| {
        let p = self::params(params)?;
        let v = match criterion {
            LcCriterion::Single => reduction::stability_single(p),
            LcCriterion::SingleOptimal => reduction::stability_single_optimal(p),
            LcCriterion::CoupledEffective => reduction::stability_coupled_effective(p),
            LcCriterion::CoupledBound => reduction::stability_coupled(p),
        };
        *self::out(out, "out")? = LcStabilityVerdict { stable: v.stable, margin: v.margin };
        Ok(())
    })
}

/// Stability from the eigenvalues of the full linear drift matrix.
///
/// # Safety
/// `params` must be a live handle; `stable` and `max_real` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_eigen_stability(
    params: *const LcParams,
    stable: *mut bool,
    max_real: *mut f64,
) -> LcStatus {
    guard(|| {
        let (s, m) = lyapunov::eigen_stable(&lyapunov::build_model(self::params(params)?));
        *out(stable, "stable")? = s;
        *out(max_real, "max_real")? = m;
        Ok(())
    })
}

/// Steady-state phonon number from the covariance of the full linear model.
/// Fails with `LC_STATUS_UNSTABLE` when the drift matrix is unstable.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_lyapunov_occupancy(params: *const LcParams, out: *mut LcOccupancy) -> LcStatus {
    guard(|| {
        let r = lyapunov::solve_steady(&lyapunov::build_model(self::params(params)?))?;
        *self::out(out, "out")? =
            LcOccupancy { n_phonon: r.n_phonon, max_real_eigenvalue: r.max_real_eigenvalue, residual: r.residual };
        Ok(())
    })
}

/// Recoil heating rate over the trap frequency for a dielectric sphere.
/// `radius` and `wavelength` share any length unit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lc_gamma_sc(radius: f64, epsilon: f64, wavelength: f64, out: *mut f64) -> LcStatus {
    guard(|| {
        *self::out(out, "out")? = params::scattering_heating_rate(radius, epsilon, wavelength)?;
        Ok(())
    })
}
