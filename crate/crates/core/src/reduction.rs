//! Effective two-mode description (auxiliary mode + sphere) and the
//! closed-form Routh-Hurwitz stability conditions.

use crate::params::NormalizedParams;

/// Default ratio used to decide that `a >> b`.
pub const DEFAULT_REGIME_FACTOR: f64 = 10.0;

/// Which of the separation-of-scales conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeDiagnostics {
    /// `|Delta'_2| >> |Delta_3|`
    pub detuning_separated: bool,
    /// `kappa >> kappa3`
    pub kappa_over_kappa3: bool,
    /// `kappa >> gamma`
    pub kappa_over_gamma: bool,
    /// `kappa >> J`
    pub kappa_over_tunneling: bool,
}

impl RegimeDiagnostics {
    pub fn all(&self) -> bool {
        self.detuning_separated && self.kappa_over_kappa3 && self.kappa_over_gamma && self.kappa_over_tunneling
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    /// `J / sqrt(Delta'_2^2 + kappa^2/4)`
    pub eta: f64,
    pub coupling_eff: f64,
    pub kappa_eff: f64,
    pub detuning_eff: f64,
    pub regime: RegimeDiagnostics,
}

impl EffectiveParams {
    pub fn regime_ok(&self) -> bool {
        self.regime.all()
    }

    /// Two-mode cooling and heating rates
    /// `Omega_eff^2 kappa_eff / ((Delta_eff +- 1)^2 + kappa_eff^2/4)`.
    pub fn rates(&self) -> (f64, f64) {
        let rate = |w: f64| {
            let d = w + self.detuning_eff;
            self.coupling_eff * self.coupling_eff * self.kappa_eff / (d * d + self.kappa_eff * self.kappa_eff / 4.0)
        };
        (rate(1.0), rate(-1.0))
    }
}

pub fn effective_params(p: &NormalizedParams) -> EffectiveParams {
    effective_params_with(p, DEFAULT_REGIME_FACTOR)
}

pub fn effective_params_with(p: &NormalizedParams, factor: f64) -> EffectiveParams {
    let eta = p.tunneling / (p.detuning2 * p.detuning2 + p.kappa * p.kappa / 4.0).sqrt();
    let eta2 = eta * eta;
    EffectiveParams {
        eta,
        coupling_eff: eta * p.coupling,
        kappa_eff: p.kappa3 + eta2 * p.kappa,
        detuning_eff: p.detuning3 - eta2 * p.detuning2,
        regime: RegimeDiagnostics {
            detuning_separated: p.detuning2.abs() >= factor * p.detuning3.abs(),
            kappa_over_kappa3: p.kappa >= factor * p.kappa3,
            kappa_over_gamma: p.kappa >= factor * p.gamma,
            kappa_over_tunneling: p.kappa >= factor * p.tunneling,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityCriterion {
    /// Single cavity, general detuning.
    Single,
    /// Single cavity at `Delta'_2 = -kappa/2`: `Omega^2 < kappa/4`.
    SingleOptimal,
    /// Coupled cavities through the effective parameters, general `Delta_eff`.
    CoupledEffective,
    /// Coupled cavities at `Delta_eff = -omega_m`:
    /// `Omega^2 < (4 + (kappa3 + eta^2 kappa)^2) / (16 eta^2)`.
    CoupledBound,
}

impl StabilityCriterion {
    pub fn label(self) -> &'static str {
        match self {
            StabilityCriterion::Single => "single",
            StabilityCriterion::SingleOptimal => "single_optimal",
            StabilityCriterion::CoupledEffective => "coupled_effective",
            StabilityCriterion::CoupledBound => "coupled_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// Signed, normalized slack of the governing inequality; positive when
    /// stable, `+inf` when the criterion places no bound.
    pub margin: f64,
    pub criterion: StabilityCriterion,
}

impl StabilityVerdict {
    fn from_margin(margin: f64, criterion: StabilityCriterion) -> Self {
        StabilityVerdict { stable: margin > 0.0, margin, criterion }
    }

    /// The criterion has no bound (vanishing effective coupling).
    pub fn is_degenerate(&self) -> bool {
        self.margin == f64::INFINITY
    }
}

/// Single-cavity condition `D [16 D Omega^2 + (4 D^2 + kappa^2) omega_m] < 0`
/// with `D = Delta'_2`; margin is minus the left side over `kappa^2 omega_m`.
/// The auxiliary mode is ignored.
pub fn stability_single(p: &NormalizedParams) -> StabilityVerdict {
    let d = p.detuning2;
    let lhs = d * (16.0 * d * p.coupling * p.coupling + (4.0 * d * d + p.kappa * p.kappa));
    StabilityVerdict::from_margin(-lhs / (p.kappa * p.kappa), StabilityCriterion::Single)
}

/// Single-cavity condition specialised to `Delta'_2 = -kappa/2`.
pub fn stability_single_optimal(p: &NormalizedParams) -> StabilityVerdict {
    let bound = p.kappa / 4.0;
    StabilityVerdict::from_margin((bound - p.coupling * p.coupling) / bound, StabilityCriterion::SingleOptimal)
}

/// Single-cavity form applied to `(Delta_eff, Omega_eff, kappa_eff)` with
/// the effective mechanical frequency equal to `omega_m`.
pub fn stability_coupled_effective(p: &NormalizedParams) -> StabilityVerdict {
    let e = effective_params(p);
    let d = e.detuning_eff;
    let lhs = d * (16.0 * d * e.coupling_eff * e.coupling_eff + (4.0 * d * d + e.kappa_eff * e.kappa_eff));
    StabilityVerdict::from_margin(-lhs / (e.kappa_eff * e.kappa_eff), StabilityCriterion::CoupledEffective)
}

/// Largest `Omega_m^2` tolerated at `Delta_eff = -omega_m` for a given `eta`.
pub fn coupled_bound(eta: f64, kappa: f64, kappa3: f64) -> f64 {
    let k_eff = kappa3 + eta * eta * kappa;
    (4.0 + k_eff * k_eff) / (16.0 * eta * eta)
}

/// `eta` minimizing [`coupled_bound`]: `(4 + kappa3^2)^(1/4) / sqrt(kappa)`.
pub fn eta_min(kappa: f64, kappa3: f64) -> f64 {
    (4.0 + kappa3 * kappa3).powf(0.25) / kappa.sqrt()
}

/// Minimum of [`coupled_bound`]: `(kappa/4) sqrt(1 + kappa3^2/4) + kappa kappa3 / 8`.
pub fn s_min(kappa: f64, kappa3: f64) -> f64 {
    kappa / 4.0 * (1.0 + kappa3 * kappa3 / 4.0).sqrt() + kappa * kappa3 / 8.0
}

/// Coupled-cavity bound on `Omega_m^2` at `Delta_eff = -omega_m`; margin is
/// `(bound - Omega^2) / bound`. With `eta = 0` there is no bound and the
/// verdict is stable with infinite margin.
pub fn stability_coupled(p: &NormalizedParams) -> StabilityVerdict {
    let eta = effective_params(p).eta;
    if eta == 0.0 {
        return StabilityVerdict::from_margin(f64::INFINITY, StabilityCriterion::CoupledBound);
    }
    let bound = coupled_bound(eta, p.kappa, p.kappa3);
    StabilityVerdict::from_margin((bound - p.coupling * p.coupling) / bound, StabilityCriterion::CoupledBound)
}
