//! One- and two-axis parameter sweeps evaluated in parallel.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::{Key, ModelSpec};
use crate::cooling;
use crate::error::{Error, Result};
use crate::lyapunov;
use crate::output::{Cell, Table};
use crate::params::NormalizedParams;
use crate::reduction;
use crate::response;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

/// A swept coordinate: a config key or the spectral frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKey {
    Param(Key),
    Omega,
}

impl AxisKey {
    pub fn name(self) -> &'static str {
        match self {
            AxisKey::Param(k) => k.name(),
            AxisKey::Omega => "omega",
        }
    }
}

/// `name:lo:hi:n:lin|log`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub key: AxisKey,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub scale: Scale,
}

impl Axis {
    pub fn new(key: AxisKey, lo: f64, hi: f64, n: usize, scale: Scale) -> Result<Self> {
        let name = key.name();
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Validation(format!("axis `{name}` bounds must be finite")));
        }
        if n < 2 {
            return Err(Error::Validation(format!("axis `{name}` needs at least 2 points")));
        }
        if scale == Scale::Log && !(lo > 0.0 && hi > 0.0) {
            return Err(Error::Validation(format!("log axis `{name}` needs positive bounds")));
        }
        if key == AxisKey::Param(Key::OmegaMUnits) {
            return Err(Error::Validation("omega_m_units cannot be swept".into()));
        }
        Ok(Axis { key, lo, hi, n, scale })
    }

    /// Grid values; the endpoints are exactly `lo` and `hi`.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == self.n - 1 {
                    return self.hi;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Lin => self.lo + (self.hi - self.lo) * t,
                    Scale::Log => (self.lo.ln() + (self.hi.ln() - self.lo.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("axis `{s}` is not name:lo:hi:n:lin|log"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, lo, hi, n, scale] = parts[..] else {
            return Err(bad());
        };
        let key = if name == "omega" { AxisKey::Omega } else { AxisKey::Param(name.parse()?) };
        let lo: f64 = lo.parse().map_err(|_| bad())?;
        let hi: f64 = hi.parse().map_err(|_| bad())?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let scale = match scale {
            "lin" => Scale::Lin,
            "log" => Scale::Log,
            _ => return Err(bad()),
        };
        Axis::new(key, lo, hi, n, scale)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantityKind {
    Sff,
    AMinus,
    APlus,
    GammaOpt,
    SpringShift,
    NQ,
    NC,
    NF,
    Stable,
    MaxRe,
    MarginSingle,
    MarginCoupled,
    Eta,
    OmegaEff,
    KappaEff,
    DeltaEff,
    NLyapunov,
    Delta2p,
    Tunneling,
    GammaSc,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 20] = [
        QuantityKind::Sff,
        QuantityKind::AMinus,
        QuantityKind::APlus,
        QuantityKind::GammaOpt,
        QuantityKind::SpringShift,
        QuantityKind::NQ,
        QuantityKind::NC,
        QuantityKind::NF,
        QuantityKind::Stable,
        QuantityKind::MaxRe,
        QuantityKind::MarginSingle,
        QuantityKind::MarginCoupled,
        QuantityKind::Eta,
        QuantityKind::OmegaEff,
        QuantityKind::KappaEff,
        QuantityKind::DeltaEff,
        QuantityKind::NLyapunov,
        QuantityKind::Delta2p,
        QuantityKind::Tunneling,
        QuantityKind::GammaSc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            QuantityKind::Sff => "S_ff",
            QuantityKind::AMinus => "A_minus",
            QuantityKind::APlus => "A_plus",
            QuantityKind::GammaOpt => "Gamma_opt",
            QuantityKind::SpringShift => "delta_omega_m",
            QuantityKind::NQ => "n_q",
            QuantityKind::NC => "n_c",
            QuantityKind::NF => "n_f",
            QuantityKind::Stable => "stable",
            QuantityKind::MaxRe => "max_re",
            QuantityKind::MarginSingle => "margin_single",
            QuantityKind::MarginCoupled => "margin_coupled",
            QuantityKind::Eta => "eta",
            QuantityKind::OmegaEff => "Omega_eff",
            QuantityKind::KappaEff => "kappa_eff",
            QuantityKind::DeltaEff => "Delta_eff",
            QuantityKind::NLyapunov => "n_lyapunov",
            QuantityKind::Delta2p => "delta2p",
            QuantityKind::Tunneling => "J",
            QuantityKind::GammaSc => "gamma_sc",
        }
    }
}

/// A requested output column. The `_single` suffix evaluates the
/// single-cavity comparison series of the same model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantity {
    pub kind: QuantityKind,
    pub single: bool,
}

impl Quantity {
    pub fn coupled(kind: QuantityKind) -> Self {
        Quantity { kind, single: false }
    }

    pub fn single(kind: QuantityKind) -> Self {
        Quantity { kind, single: true }
    }

    /// Parses a comma-separated list.
    pub fn parse_list(s: &str) -> Result<Vec<Quantity>> {
        s.split(',').map(|q| q.trim().parse()).collect()
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if self.single {
            f.write_str("_single")?;
        }
        Ok(())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = |name: &str| QuantityKind::ALL.into_iter().find(|k| k.name() == name);
        if let Some(kind) = kind(s) {
            return Ok(Quantity { kind, single: false });
        }
        s.strip_suffix("_single")
            .and_then(kind)
            .map(|kind| Quantity { kind, single: true })
            .ok_or_else(|| Error::Validation(format!("unknown quantity `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ModelSpec,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub quantities: Vec<Quantity>,
}

/// Everything computed at one grid point for one series.
struct PointEval {
    p: NormalizedParams,
    report: cooling::CoolingReport,
}

fn evaluate(q: QuantityKind, e: &PointEval, omega: Option<f64>, flags: &mut Vec<String>) -> Result<Cell> {
    let p = &e.p;
    let r = &e.report;
    let occupancy = |v: f64, flags: &mut Vec<String>| {
        if !r.is_cooling() {
            push_flag(flags, "not_cooling");
        }
        Cell::Num(v)
    };
    Ok(match q {
        QuantityKind::Sff => {
            let w = omega.ok_or_else(|| Error::Validation("S_ff needs an omega axis".into()))?;
            Cell::Num(response::s_ff(w, p))
        }
        QuantityKind::AMinus => Cell::Num(r.a_minus),
        QuantityKind::APlus => Cell::Num(r.a_plus),
        QuantityKind::GammaOpt => Cell::Num(r.gamma_opt),
        QuantityKind::SpringShift => Cell::Num(r.spring_shift),
        QuantityKind::NQ => occupancy(r.n_q, flags),
        QuantityKind::NC => occupancy(r.n_c, flags),
        QuantityKind::NF => occupancy(r.n_f, flags),
        QuantityKind::Stable => Cell::Bool(lyapunov::eigen_stable(&lyapunov::build_model(p)).0),
        QuantityKind::MaxRe => Cell::Num(lyapunov::eigen_stable(&lyapunov::build_model(p)).1),
        QuantityKind::MarginSingle => Cell::Num(reduction::stability_single(p).margin),
        QuantityKind::MarginCoupled => Cell::Num(reduction::stability_coupled(p).margin),
        QuantityKind::Eta => Cell::Num(reduction::effective_params(p).eta),
        QuantityKind::OmegaEff => Cell::Num(reduction::effective_params(p).coupling_eff),
        QuantityKind::KappaEff => Cell::Num(reduction::effective_params(p).kappa_eff),
        QuantityKind::DeltaEff => Cell::Num(reduction::effective_params(p).detuning_eff),
        QuantityKind::NLyapunov => match lyapunov::solve_steady(&lyapunov::build_model(p)) {
            Ok(c) => Cell::Num(c.n_phonon),
            Err(Error::Unstable { .. }) => {
                push_flag(flags, "unstable");
                Cell::Num(f64::NAN)
            }
            Err(e) => return Err(e),
        },
        QuantityKind::Delta2p => Cell::Num(p.detuning2),
        QuantityKind::Tunneling => Cell::Num(p.tunneling),
        QuantityKind::GammaSc => Cell::Num(p.gamma_sc),
    })
}

fn push_flag(flags: &mut Vec<String>, flag: &str) {
    if !flags.iter().any(|f| f == flag) {
        flags.push(flag.to_string());
    }
}

impl SweepSpec {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.axis1.key.name().to_string()];
        if let Some(a) = &self.axis2 {
            h.push(a.key.name().to_string());
        }
        h.extend(self.quantities.iter().map(Quantity::to_string));
        h.push("flag".to_string());
        h
    }

    fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            return Err(Error::Validation("no quantities requested".into()));
        }
        if let Some(a2) = &self.axis2 {
            if a2.key == self.axis1.key {
                return Err(Error::Validation(format!("axis `{}` given twice", a2.key.name())));
            }
        }
        let has_omega = self.axis1.key == AxisKey::Omega || self.axis2.is_some_and(|a| a.key == AxisKey::Omega);
        if !has_omega && self.quantities.iter().any(|q| q.kind == QuantityKind::Sff) {
            return Err(Error::Validation("S_ff needs an omega axis".into()));
        }
        Table::new(&self.header())?;
        Ok(())
    }

    fn row(&self, coords: &[f64]) -> Result<Vec<Cell>> {
        let mut coupled = self.base.clone();
        let mut single = self.base.single_cavity_series();
        let mut omega = None;
        let axes = std::iter::once(&self.axis1).chain(self.axis2.as_ref());
        for (axis, &v) in axes.zip(coords) {
            match axis.key {
                AxisKey::Omega => omega = Some(v),
                AxisKey::Param(k) => {
                    coupled.set(k, v)?;
                    single.set(k, v)?;
                    if k == Key::J {
                        single.set(k, 0.0)?;
                    }
                }
            }
        }
        let mut flags = Vec::new();
        let series = |spec: &ModelSpec, flags: &mut Vec<String>| -> Result<Option<PointEval>> {
            match spec.resolve() {
                Ok(p) => Ok(Some(PointEval { p, report: cooling::cooling_report(&p) })),
                Err(e) if e.is_validation() => Err(e),
                Err(e) => {
                    push_flag(flags, error_flag(&e));
                    Ok(None)
                }
            }
        };
        let need_single = self.quantities.iter().any(|q| q.single);
        let need_coupled = self.quantities.iter().any(|q| !q.single);
        let ec = if need_coupled { series(&coupled, &mut flags)? } else { None };
        let es = if need_single { series(&single, &mut flags)? } else { None };

        let mut cells: Vec<Cell> = coords.iter().map(|&v| Cell::Num(v)).collect();
        for q in &self.quantities {
            let e = if q.single { &es } else { &ec };
            let cell = match e {
                Some(e) => evaluate(q.kind, e, omega, &mut flags)?,
                None => Cell::Num(f64::NAN),
            };
            cells.push(cell);
        }
        cells.push(Cell::Text(flags.join(";")));
        Ok(cells)
    }

    /// Evaluates every grid point; rows follow axis order (axis1 outer).
    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        let v1 = self.axis1.values();
        let points: Vec<Vec<f64>> = match &self.axis2 {
            None => v1.iter().map(|&a| vec![a]).collect(),
            Some(a2) => {
                let v2 = a2.values();
                v1.iter().flat_map(|&a| v2.iter().map(move |&b| vec![a, b])).collect()
            }
        };
        let rows: Vec<Vec<Cell>> = points.par_iter().map(|c| self.row(c)).collect::<Result<_>>()?;
        let mut table = Table::new(&self.header())?;
        for r in rows {
            table.push(r)?;
        }
        Ok(table)
    }
}

/// Short machine-readable tag for a numeric failure at a grid point.
pub fn error_flag(e: &Error) -> &'static str {
    match e {
        Error::NotCooling { .. } => "not_cooling",
        Error::NoCoolingWindow => "no_cooling_window",
        Error::Unstable { .. } => "unstable",
        Error::NonConvergence { .. } => "non_convergence",
        Error::TrapAbsent => "trap_absent",
        Error::IllConditioned { .. } => "ill_conditioned",
        Error::GridTooCoarse { .. } => "grid_too_coarse",
        _ => "error",
    }
}
