//! Cooling and heating rates, net optical damping and the phonon limit.

use crate::error::{Error, Result};
use crate::params::NormalizedParams;
use crate::response::{s_ff, self_energy};

/// Number of detuning samples scanned before golden-section polishing.
pub const DETUNING_SCAN_POINTS: usize = 2001;
/// Half-width of the detuning scan in units of `kappa`.
pub const DETUNING_SCAN_SPAN: f64 = 3.0;
/// Absolute tolerance of the polished optimum (units of `omega_m`).
pub const DETUNING_TOLERANCE: f64 = 1e-6;

/// Cooling (`A_-`) and heating (`A_+`) rates: `S_FF(+omega_m)` and `S_FF(-omega_m)`.
pub fn rates(p: &NormalizedParams) -> (f64, f64) {
    (s_ff(1.0, p), s_ff(-1.0, p))
}

/// Net optical damping `Gamma_opt = A_- - A_+`.
pub fn net_rate(p: &NormalizedParams) -> f64 {
    let (a_minus, a_plus) = rates(p);
    a_minus - a_plus
}

/// Optical spring shift `Re Sigma(omega_m)`.
pub fn spring_shift(p: &NormalizedParams) -> f64 {
    self_energy(1.0, p).re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoolingReport {
    pub a_minus: f64,
    pub a_plus: f64,
    pub gamma_opt: f64,
    pub spring_shift: f64,
    /// Back-action limit `A_+ / Gamma_opt`; NaN when not cooling.
    pub n_q: f64,
    /// Scattering limit `gamma_sc / Gamma_opt`; NaN when not cooling.
    pub n_c: f64,
    /// `n_q + n_c`; NaN when not cooling.
    pub n_f: f64,
}

impl CoolingReport {
    pub fn is_cooling(&self) -> bool {
        self.gamma_opt > 0.0
    }
}

/// Rates and occupancies, with NaN occupancies when `Gamma_opt <= 0`.
pub fn cooling_report(p: &NormalizedParams) -> CoolingReport {
    let (a_minus, a_plus) = rates(p);
    let gamma_opt = a_minus - a_plus;
    let (n_q, n_c) = if gamma_opt > 0.0 { (a_plus / gamma_opt, p.gamma_sc / gamma_opt) } else { (f64::NAN, f64::NAN) };
    CoolingReport { a_minus, a_plus, gamma_opt, spring_shift: spring_shift(p), n_q, n_c, n_f: n_q + n_c }
}

/// Like [`cooling_report`] but fails with [`Error::NotCooling`] when there
/// is no net optical damping.
pub fn cooling_limit(p: &NormalizedParams) -> Result<CoolingReport> {
    p.validate()?;
    let report = cooling_report(p);
    if report.is_cooling() {
        Ok(report)
    } else {
        Err(Error::NotCooling { gamma_opt: report.gamma_opt })
    }
}

/// Final occupancy, or infinity when not cooling. Used as a search objective.
fn occupancy_objective(p: &NormalizedParams) -> f64 {
    let r = cooling_report(p);
    if r.is_cooling() {
        r.n_f
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningMode {
    /// `Delta'_2 = J^2 / (Delta_3 + omega_m)`.
    ClosedForm,
    /// Argmin of `n_f` over `Delta'_2`.
    Numeric,
}

/// Detuning `Delta'_2` minimizing the final occupancy.
pub fn optimal_detuning(p: &NormalizedParams, mode: DetuningMode) -> Result<f64> {
    p.validate()?;
    match mode {
        DetuningMode::ClosedForm => {
            let denom = p.detuning3 + 1.0;
            if denom == 0.0 {
                return Err(Error::Validation("closed-form optimum undefined at Delta_3 = -omega_m".into()));
            }
            Ok(p.tunneling * p.tunneling / denom)
        }
        DetuningMode::Numeric => {
            let (x, v) = scan_minimize(p.kappa, |d| occupancy_objective(&with_detuning(p, d)));
            if v.is_finite() {
                Ok(x)
            } else {
                Err(Error::NoCoolingWindow)
            }
        }
    }
}

/// Detuning `Delta'_2` maximizing the net damping `Gamma_opt`.
pub fn max_damping_detuning(p: &NormalizedParams) -> Result<f64> {
    p.validate()?;
    let (x, v) = scan_minimize(p.kappa, |d| -net_rate(&with_detuning(p, d)));
    if v < 0.0 {
        Ok(x)
    } else {
        Err(Error::NoCoolingWindow)
    }
}

fn with_detuning(p: &NormalizedParams, detuning2: f64) -> NormalizedParams {
    NormalizedParams { detuning2, ..*p }
}

/// Grid scan over `[-3 kappa, 3 kappa]` followed by golden-section polishing
/// inside the bracket around the best sample. Returns `(argmin, min)`.
fn scan_minimize(kappa: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let lo = -DETUNING_SCAN_SPAN * kappa;
    let hi = DETUNING_SCAN_SPAN * kappa;
    let n = DETUNING_SCAN_POINTS;
    let step = (hi - lo) / (n - 1) as f64;
    let (best, best_val) =
        (0..n)
            .map(|i| (i, f(lo + step * i as f64)))
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    if !best_val.is_finite() {
        return (lo + step * best as f64, best_val);
    }
    let a = lo + step * best.saturating_sub(1) as f64;
    let b = lo + step * (best + 1).min(n - 1) as f64;
    let x = golden_section(&f, a, b, DETUNING_TOLERANCE);
    let v = f(x);
    if v <= best_val {
        (x, v)
    } else {
        (lo + step * best as f64, best_val)
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
