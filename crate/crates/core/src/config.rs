//! Flat `key = value` model description.
//!
//! ```text
//! # Fig. 5-style coupled preset
//! omega_m_units = normalized
//! kappa = 100
//! kappa3 = 1
//! delta3 = 0.5
//! J = sqrt_kappa
//! delta2p = optimal
//! Omega_m = 0.25
//! gamma = 1e-5
//! radius_nm = 50
//! ```
//!
//! Some keys accept symbolic values that are re-evaluated whenever another
//! parameter changes (e.g. along a sweep axis): `J = sqrt_kappa |
//! sqrt_kappa_kappa3`, `kappa = J_squared`, `delta2p = optimal |
//! optimal_numeric | minus_half_kappa`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::cooling::{self, DetuningMode};
use crate::error::{Error, Result};
use crate::params::{self, NormalizedParams, PhysicalParams, TunnelingPreset};
use crate::steadystate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    OmegaMUnits,
    Delta2p,
    Delta3,
    Kappa,
    Kappa3,
    J,
    OmegaCoupling,
    Gamma,
    GammaSc,
    NTh,
    RadiusNm,
    Density,
    Epsilon,
    LambdaUm,
    CavityLengthCm,
    WaistUm,
    OmegaM,
    Delta2,
    E1,
    E2,
    E3,
}

impl Key {
    pub const ALL: [Key; 21] = [
        Key::OmegaMUnits,
        Key::Delta2p,
        Key::Delta3,
        Key::Kappa,
        Key::Kappa3,
        Key::J,
        Key::OmegaCoupling,
        Key::Gamma,
        Key::GammaSc,
        Key::NTh,
        Key::RadiusNm,
        Key::Density,
        Key::Epsilon,
        Key::LambdaUm,
        Key::CavityLengthCm,
        Key::WaistUm,
        Key::OmegaM,
        Key::Delta2,
        Key::E1,
        Key::E2,
        Key::E3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Key::OmegaMUnits => "omega_m_units",
            Key::Delta2p => "delta2p",
            Key::Delta3 => "delta3",
            Key::Kappa => "kappa",
            Key::Kappa3 => "kappa3",
            Key::J => "J",
            Key::OmegaCoupling => "Omega_m",
            Key::Gamma => "gamma",
            Key::GammaSc => "gamma_sc",
            Key::NTh => "n_th",
            Key::RadiusNm => "radius_nm",
            Key::Density => "density",
            Key::Epsilon => "epsilon",
            Key::LambdaUm => "lambda_um",
            Key::CavityLengthCm => "cavity_length_cm",
            Key::WaistUm => "waist_um",
            Key::OmegaM => "omega_m",
            Key::Delta2 => "delta2",
            Key::E1 => "E1",
            Key::E2 => "E2",
            Key::E3 => "E3",
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Key {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Key::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::UnknownKey(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    /// Rates given in units of `omega_m`.
    #[default]
    Normalized,
    /// Rates in rad/s; `omega_m` must be given.
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TunnelingSpec {
    Value(f64),
    Preset(TunnelingPreset),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaSpec {
    Value(f64),
    /// `kappa = J^2 / omega_m`.
    TunnelingSquared,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetuningSpec {
    Value(f64),
    /// `J^2 / (Delta_3 + omega_m)`.
    ClosedFormOptimum,
    /// Numerical argmin of `n_f`.
    NumericOptimum,
    /// `-kappa / 2`, the single-cavity optimum.
    MinusHalfKappa,
}

/// Laboratory description of the sphere and cavity geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSpec {
    pub radius_nm: f64,
    pub density: f64,
    pub epsilon: f64,
    pub lambda_um: f64,
    pub cavity_length_cm: f64,
    pub waist_um: f64,
}

impl Default for SphereSpec {
    fn default() -> Self {
        SphereSpec {
            radius_nm: 50.0,
            density: params::SILICA_DENSITY,
            epsilon: 2.0,
            lambda_um: 1.0,
            cavity_length_cm: 1.0,
            waist_um: 25.0,
        }
    }
}

impl SphereSpec {
    pub fn gamma_sc(&self) -> Result<f64> {
        params::scattering_heating_rate(self.radius_nm * 1e-9, self.epsilon, self.lambda_um * 1e-6)
    }
}

/// A model description that can be resolved into [`NormalizedParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub units: Units,
    pub omega_m: Option<f64>,
    pub detuning2: DetuningSpec,
    pub detuning3: f64,
    pub kappa: Option<KappaSpec>,
    pub kappa3: Option<f64>,
    pub tunneling: TunnelingSpec,
    pub coupling: Option<f64>,
    pub gamma: f64,
    /// Explicit scattering rate; otherwise derived from the sphere when any
    /// sphere key was given, else zero.
    pub gamma_sc: Option<f64>,
    pub n_th: f64,
    pub sphere: SphereSpec,
    pub sphere_given: bool,
    /// Bare cooling-mode detuning for the mean-field solve (SI only).
    pub bare_detuning2: Option<f64>,
    /// Real drive amplitudes `E1, E2, E3` (SI only).
    pub drives: [Option<f64>; 3],
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            units: Units::Normalized,
            omega_m: None,
            detuning2: DetuningSpec::Value(0.0),
            detuning3: 0.0,
            kappa: None,
            kappa3: None,
            tunneling: TunnelingSpec::Value(0.0),
            coupling: None,
            gamma: 0.0,
            gamma_sc: None,
            n_th: 0.0,
            sphere: SphereSpec::default(),
            sphere_given: false,
            bare_detuning2: None,
            drives: [None; 3],
        }
    }
}

fn parse_number(key: Key, raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = raw.parse().map_err(|_| format!("`{raw}` is not a number for key `{key}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{key}` must be finite"))
    }
}

impl ModelSpec {
    /// Parses config text. Unknown keys and duplicates are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = ModelSpec::default();
        let mut seen: Vec<Key> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config { line: line_no, msg: format!("expected `key = value`, got `{line}`") })?;
            let key: Key = k.trim().parse()?;
            if seen.contains(&key) {
                return Err(Error::Config { line: line_no, msg: format!("duplicate key `{key}`") });
            }
            seen.push(key);
            spec.assign(key, v.trim()).map_err(|msg| Error::Config { line: line_no, msg })?;
        }
        Ok(spec)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    fn assign(&mut self, key: Key, raw: &str) -> std::result::Result<(), String> {
        match key {
            Key::OmegaMUnits => {
                self.units = match raw {
                    "normalized" => Units::Normalized,
                    "si" => Units::Si,
                    other => return Err(format!("omega_m_units must be `normalized` or `si`, got `{other}`")),
                }
            }
            Key::Delta2p => {
                self.detuning2 = match raw {
                    "optimal" => DetuningSpec::ClosedFormOptimum,
                    "optimal_numeric" => DetuningSpec::NumericOptimum,
                    "minus_half_kappa" => DetuningSpec::MinusHalfKappa,
                    _ => DetuningSpec::Value(parse_number(key, raw)?),
                }
            }
            Key::J => {
                self.tunneling = match raw {
                    "sqrt_kappa" => TunnelingSpec::Preset(TunnelingPreset::SqrtKappaOmegaM),
                    "sqrt_kappa_kappa3" => TunnelingSpec::Preset(TunnelingPreset::SqrtKappaKappa3),
                    _ => TunnelingSpec::Value(parse_number(key, raw)?),
                }
            }
            Key::Kappa => {
                self.kappa = Some(match raw {
                    "J_squared" => KappaSpec::TunnelingSquared,
                    _ => KappaSpec::Value(parse_number(key, raw)?),
                })
            }
            _ => self.set(key, parse_number(key, raw)?).map_err(|e| e.to_string())?,
        }
        Ok(())
    }

    /// Sets a numeric value, as a sweep axis does.
    pub fn set(&mut self, key: Key, v: f64) -> Result<()> {
        match key {
            Key::OmegaMUnits => return Err(Error::Validation("omega_m_units is not numeric".into())),
            Key::Delta2p => self.detuning2 = DetuningSpec::Value(v),
            Key::Delta3 => self.detuning3 = v,
            Key::Kappa => self.kappa = Some(KappaSpec::Value(v)),
            Key::Kappa3 => self.kappa3 = Some(v),
            Key::J => self.tunneling = TunnelingSpec::Value(v),
            Key::OmegaCoupling => self.coupling = Some(v),
            Key::Gamma => self.gamma = v,
            Key::GammaSc => self.gamma_sc = Some(v),
            Key::NTh => self.n_th = v,
            Key::RadiusNm | Key::Density | Key::Epsilon | Key::LambdaUm | Key::CavityLengthCm | Key::WaistUm => {
                let s = &mut self.sphere;
                match key {
                    Key::RadiusNm => s.radius_nm = v,
                    Key::Density => s.density = v,
                    Key::Epsilon => s.epsilon = v,
                    Key::LambdaUm => s.lambda_um = v,
                    Key::CavityLengthCm => s.cavity_length_cm = v,
                    _ => s.waist_um = v,
                }
                self.sphere_given = true;
                // a swept sphere parameter overrides a fixed scattering rate
                if matches!(key, Key::RadiusNm | Key::Epsilon | Key::LambdaUm) {
                    self.gamma_sc = None;
                }
            }
            Key::OmegaM => self.omega_m = Some(v),
            Key::Delta2 => self.bare_detuning2 = Some(v),
            Key::E1 => self.drives[0] = Some(v),
            Key::E2 => self.drives[1] = Some(v),
            Key::E3 => self.drives[2] = Some(v),
        }
        Ok(())
    }

    /// Disconnects the auxiliary cavity and moves to the single-cavity
    /// optimum `Delta'_2 = -kappa/2`.
    pub fn single_cavity(&self) -> Self {
        ModelSpec { tunneling: TunnelingSpec::Value(0.0), detuning2: DetuningSpec::MinusHalfKappa, ..self.clone() }
    }

    /// The single-cavity comparison series: `J = 0`; a detuning tied to the
    /// coupled optimum moves to `-kappa/2`, an explicit one is kept.
    pub fn single_cavity_series(&self) -> Self {
        let detuning2 = match self.detuning2 {
            DetuningSpec::ClosedFormOptimum | DetuningSpec::NumericOptimum => DetuningSpec::MinusHalfKappa,
            other => other,
        };
        ModelSpec { tunneling: TunnelingSpec::Value(0.0), detuning2, ..self.clone() }
    }

    /// Resolves the description into the dimensionless model.
    pub fn resolve(&self) -> Result<NormalizedParams> {
        let scale = match self.units {
            Units::Normalized => {
                if self.omega_m.is_some() || self.drives.iter().any(Option::is_some) || self.bare_detuning2.is_some() {
                    return Err(Error::Validation("omega_m, delta2 and E1..E3 require omega_m_units = si".into()));
                }
                1.0
            }
            Units::Si => match self.omega_m {
                Some(w) if w.is_finite() && w > 0.0 => w,
                _ => return Err(Error::Validation("si units need a positive omega_m".into())),
            },
        };
        let kappa3 = self.kappa3.ok_or_else(|| Error::Validation("kappa3 is required".into()))? / scale;
        let (kappa, tunneling) = match (self.kappa, self.tunneling) {
            (None, _) => return Err(Error::Validation("kappa is required".into())),
            (Some(KappaSpec::TunnelingSquared), TunnelingSpec::Preset(_)) => {
                return Err(Error::Validation("kappa and J cannot both be tied to each other".into()))
            }
            (Some(KappaSpec::TunnelingSquared), TunnelingSpec::Value(j)) => {
                let j = j / scale;
                (j * j, j)
            }
            (Some(KappaSpec::Value(k)), TunnelingSpec::Value(j)) => (k / scale, j / scale),
            (Some(KappaSpec::Value(k)), TunnelingSpec::Preset(preset)) => {
                let k = k / scale;
                (k, preset.value(k, kappa3))
            }
        };
        let gamma_sc = match self.gamma_sc {
            Some(g) => g / scale,
            None if self.sphere_given => self.sphere.gamma_sc()?,
            None => 0.0,
        };
        let mut p = NormalizedParams {
            detuning2: 0.0,
            detuning3: self.detuning3 / scale,
            kappa,
            kappa3,
            tunneling,
            coupling: self.coupling.unwrap_or(0.0) / scale,
            gamma: self.gamma / scale,
            gamma_sc,
            n_th: self.n_th,
        };

        let mean_field = self.units == Units::Si && self.coupling.is_none() && self.drives[0].is_some();
        if mean_field {
            if !matches!(self.detuning2, DetuningSpec::Value(v) if v == 0.0) {
                return Err(Error::Validation(
                    "delta2p is computed by the mean-field solve; give the bare delta2 instead".into(),
                ));
            }
            let phys = self.physical(p.kappa * scale, p.kappa3 * scale, p.tunneling * scale, scale)?;
            let ss = steadystate::solve_mean_fields(&phys)?;
            let lp = steadystate::linear_point(&ss, &phys)?;
            p.detuning2 = lp.detuning2;
            p.coupling = lp.coupling;
        } else {
            p.detuning2 = match self.detuning2 {
                DetuningSpec::Value(v) => v / scale,
                DetuningSpec::MinusHalfKappa => -p.kappa / 2.0,
                DetuningSpec::ClosedFormOptimum => {
                    p.validate()?;
                    cooling::optimal_detuning(&p, DetuningMode::ClosedForm)?
                }
                DetuningSpec::NumericOptimum => {
                    p.validate()?;
                    cooling::optimal_detuning(&p, DetuningMode::Numeric)?
                }
            };
        }
        p.validate()?;
        Ok(p)
    }

    /// Laboratory parameters for the mean-field solve. Rates in rad/s.
    fn physical(&self, kappa: f64, kappa3: f64, tunneling: f64, omega_m: f64) -> Result<PhysicalParams> {
        let s = &self.sphere;
        let drive = |i: usize| Complex64::new(self.drives[i].unwrap_or(0.0), 0.0);
        let phys = PhysicalParams {
            radius: s.radius_nm * 1e-9,
            density: s.density,
            epsilon: s.epsilon,
            wavelength: s.lambda_um * 1e-6,
            cavity_length: s.cavity_length_cm * 1e-2,
            waist: s.waist_um * 1e-6,
            omega_m,
            kappa,
            kappa3,
            gamma: self.gamma,
            n_th: self.n_th,
            drives: [drive(0), drive(1), drive(2)],
            detunings: [0.0, self.bare_detuning2.unwrap_or(0.0), self.detuning3],
            tunneling: Complex64::new(tunneling, 0.0),
            mode_volume_factor: PI / 4.0,
        };
        phys.validate()?;
        Ok(phys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG5: &str = "\
# coupled preset
omega_m_units = normalized
kappa = 100
kappa3 = 1
delta3 = 0.5
J = sqrt_kappa      # tied to kappa
delta2p = optimal
Omega_m = 0.25
gamma = 1e-5
radius_nm = 50
";

    #[test]
    fn parses_fig5_preset() {
        let p = ModelSpec::parse(FIG5).unwrap().resolve().unwrap();
        assert_eq!(p.kappa, 100.0);
        assert_eq!(p.tunneling, 10.0);
        assert!((p.detuning2 - 100.0 / 1.5).abs() < 1e-12);
        assert!((p.gamma_sc - 1.0336e-3).abs() < 1e-7);
        assert_eq!(p.coupling, 0.25);
    }

    #[test]
    fn ties_follow_overrides() {
        let mut spec = ModelSpec::parse(FIG5).unwrap();
        spec.set(Key::Kappa, 400.0).unwrap();
        let p = spec.resolve().unwrap();
        assert_eq!(p.tunneling, 20.0);
        assert!((p.detuning2 - 400.0 / 1.5).abs() < 1e-12);
        spec.set(Key::RadiusNm, 100.0).unwrap();
        assert!((spec.resolve().unwrap().gamma_sc - 8.0 * 1.0336e-3).abs() < 1e-6);
    }

    #[test]
    fn unknown_key_is_fatal() {
        let err = ModelSpec::parse("kappa = 1\nkapa3 = 2\n").unwrap_err();
        assert!(matches!(err, Error::UnknownKey(ref k) if k == "kapa3"));
        assert!(err.is_validation());
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(ModelSpec::parse("kappa 1"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(ModelSpec::parse("\nkappa = x"), Err(Error::Config { line: 2, .. })));
        assert!(matches!(ModelSpec::parse("kappa=1\nkappa=2"), Err(Error::Config { line: 2, .. })));
        assert!(ModelSpec::parse("omega_m_units = furlongs").is_err());
        assert!(ModelSpec::parse("gamma = inf").is_err());
    }

    #[test]
    fn missing_required_keys() {
        assert!(ModelSpec::parse("kappa = 1").unwrap().resolve().is_err());
        assert!(ModelSpec::parse("kappa3 = 1").unwrap().resolve().is_err());
        let tied = ModelSpec::parse("kappa = J_squared\nkappa3 = 1\nJ = sqrt_kappa").unwrap();
        assert!(tied.resolve().is_err());
    }

    #[test]
    fn kappa_tied_to_tunneling() {
        let p = ModelSpec::parse("kappa = J_squared\nkappa3 = 1\nJ = 3\ndelta2p = 1").unwrap().resolve().unwrap();
        assert_eq!(p.kappa, 9.0);
    }

    #[test]
    fn si_units_divide_by_omega_m() {
        let w = 2.0 * PI * 0.5e6;
        let text = format!(
            "omega_m_units = si\nomega_m = {w}\nkappa = {}\nkappa3 = {w}\nOmega_m = {}\ndelta2p = {}\n",
            100.0 * w,
            0.25 * w,
            -50.0 * w
        );
        let p = ModelSpec::parse(&text).unwrap().resolve().unwrap();
        assert!((p.kappa - 100.0).abs() < 1e-12);
        assert!((p.coupling - 0.25).abs() < 1e-12);
        assert!((p.detuning2 + 50.0).abs() < 1e-12);
        assert!(ModelSpec::parse("omega_m_units = si\nkappa = 1\nkappa3 = 1").unwrap().resolve().is_err());
    }

    #[test]
    fn si_mean_field_route() {
        let w = 2.0 * PI * 0.5e6;
        let text = format!(
            "omega_m_units = si\nomega_m = {w}\nkappa = {}\nkappa3 = {w}\ndelta2 = {}\nE1 = 1e13\nE2 = 3e11\n",
            100.0 * w,
            -50.0 * w
        );
        let p = ModelSpec::parse(&text).unwrap().resolve().unwrap();
        assert!(p.coupling > 0.0);
        assert!(p.detuning2 > -50.0 && p.detuning2 < -49.0);
        assert!(ModelSpec::parse("E1 = 1\nkappa = 1\nkappa3 = 1").unwrap().resolve().is_err());
    }

    #[test]
    fn single_cavity_transform() {
        let p = ModelSpec::parse(FIG5).unwrap().single_cavity().resolve().unwrap();
        assert_eq!(p.tunneling, 0.0);
        assert_eq!(p.detuning2, -50.0);
    }

    #[test]
    fn single_series_keeps_explicit_detuning() {
        let spec = ModelSpec::parse(FIG5).unwrap();
        assert_eq!(spec.single_cavity_series().resolve().unwrap().detuning2, -50.0);
        let mut fixed = spec.clone();
        fixed.set(Key::Delta2p, 7.0).unwrap();
        let p = fixed.single_cavity_series().resolve().unwrap();
        assert_eq!((p.detuning2, p.tunneling), (7.0, 0.0));
    }

    #[test]
    fn key_names_round_trip() {
        for k in Key::ALL {
            assert_eq!(k.name().parse::<Key>().unwrap(), k);
        }
    }
}
