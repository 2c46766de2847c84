//! Physical and dimensionless parameter sets.
//!
//! Every analysis routine works on [`NormalizedParams`], where all rates are
//! expressed in units of the mechanical frequency `omega_m`. [`PhysicalParams`]
//! is the laboratory-unit description used to derive the scattering heating
//! rate, the single-photon coupling `g`, the zero-point length and (through
//! the mean-field solver) the linearization point.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::steadystate::SteadyState;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Density of fused silica (kg/m^3).
pub const SILICA_DENSITY: f64 = 2200.0;
/// Standing-wave Gaussian mode volume prefactor: `V_c = (pi/4) w^2 L`.
pub const GAUSSIAN_MODE_FACTOR: f64 = PI / 4.0;

/// Laboratory-unit description of sphere, trap, cavities and drives.
///
/// Lengths in metres, rates and detunings in rad/s. Drive amplitudes `E_i`
/// and the tunnelling `J` are complex rates.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    pub radius: f64,
    pub density: f64,
    pub epsilon: f64,
    pub wavelength: f64,
    pub cavity_length: f64,
    pub waist: f64,
    pub omega_m: f64,
    pub kappa: f64,
    pub kappa3: f64,
    pub gamma: f64,
    pub n_th: f64,
    /// Pump amplitudes `E1` (trap), `E2` (cooling), `E3` (auxiliary).
    pub drives: [Complex64; 3],
    /// Detunings `Delta1`, `Delta2` (bare), `Delta3`.
    pub detunings: [f64; 3],
    pub tunneling: Complex64,
    /// `V_c = mode_volume_factor * waist^2 * cavity_length`.
    pub mode_volume_factor: f64,
}

impl PhysicalParams {
    /// 50 nm silica sphere at 0.5 MHz in a 1 cm cavity with a 25 um waist,
    /// 1 um light, `kappa = 100 omega_m`, `kappa3 = omega_m`,
    /// `gamma = 1e-5 omega_m`. Drives, detunings and tunnelling are zero.
    pub fn silica_reference() -> Self {
        let omega_m = 2.0 * PI * 0.5e6;
        PhysicalParams {
            radius: 50e-9,
            density: SILICA_DENSITY,
            epsilon: 2.0,
            wavelength: 1e-6,
            cavity_length: 1e-2,
            waist: 25e-6,
            omega_m,
            kappa: 100.0 * omega_m,
            kappa3: omega_m,
            gamma: 1e-5 * omega_m,
            n_th: 0.0,
            drives: [Complex64::new(0.0, 0.0); 3],
            detunings: [0.0; 3],
            tunneling: Complex64::new(0.0, 0.0),
            mode_volume_factor: GAUSSIAN_MODE_FACTOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("radius", self.radius),
            ("density", self.density),
            ("wavelength", self.wavelength),
            ("cavity_length", self.cavity_length),
            ("waist", self.waist),
            ("omega_m", self.omega_m),
            ("kappa", self.kappa),
            ("kappa3", self.kappa3),
            ("mode_volume_factor", self.mode_volume_factor),
        ];
        for (name, v) in positive {
            ensure(v.is_finite() && v > 0.0, || format!("{name} must be positive, got {v}"))?;
        }
        ensure(self.epsilon.is_finite() && self.epsilon > 1.0, || {
            format!("epsilon must exceed 1, got {}", self.epsilon)
        })?;
        ensure(self.gamma.is_finite() && self.gamma >= 0.0, || {
            format!("gamma must be nonnegative, got {}", self.gamma)
        })?;
        ensure(self.n_th.is_finite() && self.n_th >= 0.0, || format!("n_th must be nonnegative, got {}", self.n_th))?;
        let complex_ok =
            self.drives.iter().chain(std::iter::once(&self.tunneling)).all(|z| z.re.is_finite() && z.im.is_finite());
        ensure(complex_ok, || "drive amplitudes and J must be finite".into())?;
        ensure(self.detunings.iter().all(|d| d.is_finite()), || "detunings must be finite".into())
    }

    pub fn volume(&self) -> f64 {
        sphere_volume(self.radius)
    }

    pub fn mass(&self) -> f64 {
        self.density * self.volume()
    }

    /// Optical wavenumber `k = 2 pi / lambda`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Optical angular frequency `omega = 2 pi c / lambda`.
    pub fn optical_frequency(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    pub fn mode_volume(&self) -> f64 {
        self.mode_volume_factor * self.waist * self.waist * self.cavity_length
    }
}

pub fn sphere_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

/// Clausius-Mossotti factor `(eps - 1) / (eps + 2)`.
pub fn polarizability_factor(epsilon: f64) -> f64 {
    (epsilon - 1.0) / (epsilon + 2.0)
}

/// Scattering (recoil) heating rate in units of `omega_m`:
/// `(4 pi^2 / 5) (eps - 1)/(eps + 2) V / lambda^3`.
///
/// The ratio does not depend on `omega_m` itself.
pub fn scattering_heating_rate(radius: f64, epsilon: f64, wavelength: f64) -> Result<f64> {
    ensure(radius.is_finite() && radius >= 0.0, || format!("radius must be nonnegative, got {radius}"))?;
    ensure(epsilon.is_finite() && epsilon >= 1.0, || format!("epsilon must be >= 1, got {epsilon}"))?;
    ensure(wavelength.is_finite() && wavelength > 0.0, || format!("wavelength must be positive, got {wavelength}"))?;
    let v_over_l3 = sphere_volume(radius) / wavelength.powi(3);
    Ok(4.0 * PI * PI / 5.0 * polarizability_factor(epsilon) * v_over_l3)
}

/// `gamma_sc / omega_m` for the sphere described by `phys`.
pub fn gamma_sc(phys: &PhysicalParams) -> Result<f64> {
    phys.validate()?;
    scattering_heating_rate(phys.radius, phys.epsilon, phys.wavelength)
}

/// Single-photon optomechanical coupling `g = (3V / 4V_c) (eps-1)/(eps+2) omega`
/// in rad/s.
pub fn coupling_g(phys: &PhysicalParams) -> Result<f64> {
    phys.validate()?;
    Ok(3.0 * phys.volume() / (4.0 * phys.mode_volume())
        * polarizability_factor(phys.epsilon)
        * phys.optical_frequency())
}

/// Zero-point length `sqrt(hbar / 2 m omega_m)` in metres.
pub fn x_zpf(phys: &PhysicalParams) -> Result<f64> {
    phys.validate()?;
    Ok((HBAR / (2.0 * phys.mass() * phys.omega_m)).sqrt())
}

/// Dimensionless model state: every rate in units of `omega_m`.
///
/// `tunneling` (J) and `coupling` (Omega_m) are moduli; their phases are
/// absorbed into the definitions of the auxiliary and mechanical modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedParams {
    /// Effective cooling-mode detuning `Delta'_2`.
    pub detuning2: f64,
    /// Auxiliary-mode detuning `Delta_3`.
    pub detuning3: f64,
    pub kappa: f64,
    pub kappa3: f64,
    /// Inter-cavity tunnelling `J`.
    pub tunneling: f64,
    /// Effective optomechanical coupling `Omega_m`.
    pub coupling: f64,
    pub gamma: f64,
    pub gamma_sc: f64,
    pub n_th: f64,
}

impl NormalizedParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta2p", self.detuning2),
            ("delta3", self.detuning3),
            ("kappa", self.kappa),
            ("kappa3", self.kappa3),
            ("J", self.tunneling),
            ("Omega_m", self.coupling),
            ("gamma", self.gamma),
            ("gamma_sc", self.gamma_sc),
            ("n_th", self.n_th),
        ];
        for (name, v) in fields {
            ensure(v.is_finite(), || format!("{name} must be finite, got {v}"))?;
        }
        ensure(self.kappa > 0.0, || format!("kappa must be positive, got {}", self.kappa))?;
        ensure(self.kappa3 > 0.0, || format!("kappa3 must be positive, got {}", self.kappa3))?;
        for (name, v) in [
            ("gamma", self.gamma),
            ("gamma_sc", self.gamma_sc),
            ("J", self.tunneling),
            ("Omega_m", self.coupling),
            ("n_th", self.n_th),
        ] {
            ensure(v >= 0.0, || format!("{name} must be nonnegative, got {v}"))?;
        }
        Ok(())
    }

    /// Same parameters with the auxiliary cavity disconnected (`J = 0`).
    pub fn single_cavity(&self) -> Self {
        NormalizedParams { tunneling: 0.0, ..*self }
    }

    /// Restores rates in rad/s for a given `omega_m`.
    pub fn denormalize(&self, omega_m: f64) -> Result<DimensionalRates> {
        ensure(omega_m.is_finite() && omega_m > 0.0, || format!("omega_m must be positive, got {omega_m}"))?;
        Ok(DimensionalRates {
            omega_m,
            detuning2: self.detuning2 * omega_m,
            detuning3: self.detuning3 * omega_m,
            kappa: self.kappa * omega_m,
            kappa3: self.kappa3 * omega_m,
            tunneling: self.tunneling * omega_m,
            coupling: self.coupling * omega_m,
            gamma: self.gamma * omega_m,
            gamma_sc: self.gamma_sc * omega_m,
            n_th: self.n_th,
        })
    }
}

/// The rate content of [`NormalizedParams`] in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalRates {
    pub omega_m: f64,
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

impl DimensionalRates {
    pub fn normalize(&self) -> Result<NormalizedParams> {
        let w = self.omega_m;
        ensure(w.is_finite() && w > 0.0, || format!("omega_m must be positive, got {w}"))?;
        let p = NormalizedParams {
            detuning2: self.detuning2 / w,
            detuning3: self.detuning3 / w,
            kappa: self.kappa / w,
            kappa3: self.kappa3 / w,
            tunneling: self.tunneling.abs() / w,
            coupling: self.coupling.abs() / w,
            gamma: self.gamma / w,
            gamma_sc: self.gamma_sc / w,
            n_th: self.n_th,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Builds the dimensionless model from laboratory parameters and a solved
/// mean-field state. `Omega_m` and `Delta'_2` come from `steady`; `|J|` and
/// `|Omega_m|` are taken so both end up real and nonnegative.
pub fn normalize(phys: &PhysicalParams, steady: &SteadyState) -> Result<NormalizedParams> {
    phys.validate()?;
    let w = phys.omega_m;
    let p = NormalizedParams {
        detuning2: steady.detuning2 / w,
        detuning3: phys.detunings[2] / w,
        kappa: phys.kappa / w,
        kappa3: phys.kappa3 / w,
        tunneling: phys.tunneling.norm() / w,
        coupling: steady.coupling.norm() / w,
        gamma: phys.gamma / w,
        gamma_sc: gamma_sc(phys)?,
        n_th: phys.n_th,
    };
    p.validate()?;
    Ok(p)
}

/// The two tunnelling choices used in the literature this model follows.
/// Neither is applied unless asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TunnelingPreset {
    /// `J = sqrt(kappa omega_m)`.
    SqrtKappaOmegaM,
    /// `J = sqrt(kappa kappa3)` (impedance-matched input-output choice).
    SqrtKappaKappa3,
}

impl TunnelingPreset {
    /// Tunnelling in units of `omega_m` given normalized decay rates.
    pub fn value(self, kappa: f64, kappa3: f64) -> f64 {
        match self {
            TunnelingPreset::SqrtKappaOmegaM => kappa.sqrt(),
            TunnelingPreset::SqrtKappaKappa3 => (kappa * kappa3).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_sc_reference_sphere() {
        let phys = PhysicalParams::silica_reference();
        // (4 pi^2/5) * (1/4) * (4/3 pi 0.05^3)
        let expected = 4.0 * PI * PI / 5.0 * 0.25 * (4.0 / 3.0 * PI * 1.25e-4);
        let got = gamma_sc(&phys).unwrap();
        assert!(rel(got, expected) < 1e-14);
        assert!(rel(got, 1.0336e-3) < 1e-4, "got {got}");
    }

    #[test]
    fn gamma_sc_vanishes_in_limits() {
        assert_eq!(scattering_heating_rate(50e-9, 1.0, 1e-6).unwrap(), 0.0);
        assert_eq!(scattering_heating_rate(0.0, 2.0, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn gamma_sc_homogeneous_degree_three() {
        let a = scattering_heating_rate(40e-9, 2.1, 1.0e-6).unwrap();
        let b = scattering_heating_rate(80e-9, 2.1, 2.0e-6).unwrap();
        assert!(rel(a, b) < 1e-14);
        let c = scattering_heating_rate(80e-9, 2.1, 1.0e-6).unwrap();
        assert!(rel(c, 8.0 * a) < 1e-14);
    }

    #[test]
    fn coupling_g_hand_value() {
        let phys = PhysicalParams::silica_reference();
        let v = 4.0 / 3.0 * PI * (50e-9f64).powi(3);
        let vc = PI / 4.0 * (25e-6f64).powi(2) * 1e-2;
        let omega = 2.0 * PI * 299_792_458.0 / 1e-6;
        let expected = 0.75 * v / vc * 0.25 * omega;
        let g = coupling_g(&phys).unwrap();
        assert!(rel(g, expected) < 1e-14);
        // 3.77e4 rad/s for this geometry
        assert!((g - 3.7673e4).abs() < 1.0, "g = {g}");
    }

    #[test]
    fn coupling_g_linear_in_volume() {
        let mut phys = PhysicalParams::silica_reference();
        let g1 = coupling_g(&phys).unwrap();
        phys.radius *= 2f64.powf(1.0 / 3.0);
        let g2 = coupling_g(&phys).unwrap();
        assert!(rel(g2, 2.0 * g1) < 1e-12);
        phys.epsilon = 1.0 + 1e-12;
        assert!(coupling_g(&phys).unwrap() < 1e-11 * g1);
    }

    #[test]
    fn x_zpf_hand_value_and_scaling() {
        let phys = PhysicalParams::silica_reference();
        let m = 2200.0 * 4.0 / 3.0 * PI * (50e-9f64).powi(3);
        let w = 2.0 * PI * 0.5e6;
        let expected = (1.054_571_817e-34 / (2.0 * m * w)).sqrt();
        assert!(rel(x_zpf(&phys).unwrap(), expected) < 1e-14);
        assert!((x_zpf(&phys).unwrap() - 3.82e-12).abs() < 0.01e-12);

        let mut heavy = phys.clone();
        heavy.density *= 4.0;
        assert!(rel(x_zpf(&heavy).unwrap(), 0.5 * x_zpf(&phys).unwrap()) < 1e-14);

        let mut fast = phys.clone();
        fast.omega_m = 1e300;
        assert!(x_zpf(&fast).unwrap() < 1e-150);
    }

    #[test]
    fn rejects_bad_geometry() {
        let mut phys = PhysicalParams::silica_reference();
        phys.waist = 0.0;
        assert!(coupling_g(&phys).unwrap_err().is_validation());
        let mut phys = PhysicalParams::silica_reference();
        phys.epsilon = 0.5;
        assert!(gamma_sc(&phys).is_err());
        let mut phys = PhysicalParams::silica_reference();
        phys.omega_m = -1.0;
        assert!(x_zpf(&phys).is_err());
    }

    #[test]
    fn normalize_divides_by_omega_m() {
        let mut phys = PhysicalParams::silica_reference();
        phys.kappa = 2.0 * PI * 50e6;
        phys.tunneling = Complex64::from_polar(3.0 * phys.omega_m, 1.2);
        let ss = SteadyState::prescribed(-0.5 * phys.omega_m, Complex64::from_polar(0.25 * phys.omega_m, -2.0));
        let p = normalize(&phys, &ss).unwrap();
        assert!(rel(p.kappa, 100.0) < 1e-14);
        assert!(rel(p.tunneling, 3.0) < 1e-14);
        assert!(rel(p.coupling, 0.25) < 1e-14);
        assert!(rel(p.detuning2, -0.5) < 1e-14);
    }

    #[test]
    fn normalize_is_identity_at_unit_omega_m() {
        let rates = DimensionalRates {
            omega_m: 1.0,
            detuning2: 3.0,
            detuning3: 0.5,
            kappa: 100.0,
            kappa3: 1.0,
            tunneling: 10.0,
            coupling: 0.25,
            gamma: 1e-5,
            gamma_sc: 1e-3,
            n_th: 2.0,
        };
        let p = rates.normalize().unwrap();
        assert_eq!(p.denormalize(1.0).unwrap(), rates);
        assert!(rates.normalize().is_ok());
        let bad = DimensionalRates { omega_m: 0.0, ..rates };
        assert!(bad.normalize().is_err());
    }

    #[test]
    fn tunneling_presets() {
        assert_eq!(TunnelingPreset::SqrtKappaOmegaM.value(100.0, 4.0), 10.0);
        assert_eq!(TunnelingPreset::SqrtKappaKappa3.value(100.0, 4.0), 20.0);
    }
}
