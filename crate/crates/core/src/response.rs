//! Frequency-domain response of the coupled cavities and the optical force
//! noise spectrum seen by the sphere.
//!
//! All frequencies are in units of `omega_m`; spectra are reported as the
//! dimensionless `S_FF x_zpf^2 / omega_m`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::NormalizedParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Grid size used when a caller does not pick one.
pub const DEFAULT_GRID_POINTS: usize = 4001;

/// Cooling-cavity susceptibility `1 / (-i(w + Delta'_2) + kappa/2)`.
pub fn chi2(omega: f64, p: &NormalizedParams) -> Complex64 {
    1.0 / (-I * (omega + p.detuning2) + p.kappa / 2.0)
}

/// Auxiliary-cavity susceptibility `1 / (-i(w + Delta_3) + kappa3/2)`.
pub fn chi3(omega: f64, p: &NormalizedParams) -> Complex64 {
    1.0 / (-I * (omega + p.detuning3) + p.kappa3 / 2.0)
}

/// Mechanical susceptibility `1 / (-i(w - omega_m) + gamma/2)`.
pub fn chi_m(omega: f64, p: &NormalizedParams) -> Complex64 {
    1.0 / (-I * (omega - 1.0) + p.gamma / 2.0)
}

/// Total response of the two coupled cavities, `1 / (1/chi2 + J^2 chi3)`.
pub fn chi_total(omega: f64, p: &NormalizedParams) -> Complex64 {
    let inv2 = -I * (omega + p.detuning2) + p.kappa / 2.0;
    1.0 / (inv2 + p.tunneling * p.tunneling * chi3(omega, p))
}

/// Which conjugate enters the self-energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfEnergyConvention {
    /// `-i Omega^2 [chi(w) - chi*(-w)]`; its imaginary part at `omega_m`
    /// reproduces `A_- - A_+`.
    #[default]
    MirroredConjugate,
    /// `-i Omega^2 [chi(w) - chi*(w)]`, kept for comparison only.
    SameFrequencyConjugate,
}

/// Optomechanical self-energy `Sigma(w)` (default convention).
pub fn self_energy(omega: f64, p: &NormalizedParams) -> Complex64 {
    self_energy_with(omega, p, SelfEnergyConvention::MirroredConjugate)
}

pub fn self_energy_with(omega: f64, p: &NormalizedParams, convention: SelfEnergyConvention) -> Complex64 {
    let mirror = match convention {
        SelfEnergyConvention::MirroredConjugate => chi_total(-omega, p).conj(),
        SelfEnergyConvention::SameFrequencyConjugate => chi_total(omega, p).conj(),
    };
    -I * p.coupling * p.coupling * (chi_total(omega, p) - mirror)
}

/// Force noise spectral density `Omega^2 |chi|^2 (kappa + kappa3 J^2 |chi3|^2)`.
pub fn s_ff(omega: f64, p: &NormalizedParams) -> f64 {
    let c3 = chi3(omega, p);
    let j2 = p.tunneling * p.tunneling;
    p.coupling * p.coupling * chi_total(omega, p).norm_sqr() * (p.kappa + p.kappa3 * j2 * c3.norm_sqr())
}

/// All response functions at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseSet {
    pub omega: f64,
    pub chi2: Complex64,
    pub chi3: Complex64,
    pub chi: Complex64,
    pub chi_m: Complex64,
    pub sigma: Complex64,
}

impl ResponseSet {
    pub fn at(omega: f64, p: &NormalizedParams) -> Self {
        ResponseSet {
            omega,
            chi2: chi2(omega, p),
            chi3: chi3(omega, p),
            chi: chi_total(omega, p),
            chi_m: chi_m(omega, p),
            sigma: self_energy(omega, p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub omega: f64,
    pub s: f64,
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo && n >= 2) {
        return Err(Error::Validation(format!(
            "grid needs finite lo < hi and at least 2 points, got [{lo}, {hi}] x {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect())
}

/// Evaluates `S_FF` on a strictly increasing frequency grid.
pub fn spectrum_scan(grid: &[f64], p: &NormalizedParams) -> Result<Vec<SpectrumSample>> {
    p.validate()?;
    if let Some(w) = grid.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::Validation(format!("frequency grid must be strictly increasing ({} then {})", w[0], w[1])));
    }
    Ok(grid.iter().map(|&omega| SpectrumSample { omega, s: s_ff(omega, p) }).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Location refined by a parabola through the three bracketing samples.
    pub omega: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Interior extrema from sign changes of the discrete derivative.
///
/// Fails with [`Error::GridTooCoarse`] when two extrema fall on adjacent
/// samples or the derivative vanishes exactly, since the grid then cannot
/// tell a narrow feature from a flat one.
pub fn find_extrema(samples: &[SpectrumSample]) -> Result<Vec<Extremum>> {
    let mut out: Vec<(usize, Extremum)> = Vec::new();
    for i in 1..samples.len().saturating_sub(1) {
        let (a, b, c) = (samples[i - 1], samples[i], samples[i + 1]);
        let left = b.s - a.s;
        let right = c.s - b.s;
        if left == 0.0 || right == 0.0 {
            if (left == 0.0) != (right == 0.0) && b.s != 0.0 {
                return Err(Error::GridTooCoarse { omega: b.omega });
            }
            continue;
        }
        let kind = match (left > 0.0, right > 0.0) {
            (true, false) => ExtremumKind::Max,
            (false, true) => ExtremumKind::Min,
            _ => continue,
        };
        if let Some((j, _)) = out.last() {
            if *j + 1 == i {
                return Err(Error::GridTooCoarse { omega: b.omega });
            }
        }
        out.push((i, refine(a, b, c, kind)));
    }
    Ok(out.into_iter().map(|(_, e)| e).collect())
}

fn refine(a: SpectrumSample, b: SpectrumSample, c: SpectrumSample, kind: ExtremumKind) -> Extremum {
    let (x0, x1, x2) = (a.omega, b.omega, c.omega);
    let d1 = (b.s - a.s) / (x1 - x0);
    let d2 = (c.s - b.s) / (x2 - x1);
    let curv = (d2 - d1) / (x2 - x0);
    let omega = if curv != 0.0 {
        let vertex = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
        vertex.clamp(x0, x2)
    } else {
        x1
    };
    Extremum { omega, value: b.s, kind }
}

/// Qualitative shape of the spectrum inside a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lineshape {
    /// No interior extremum.
    Monotone,
    /// A single peak.
    Peak,
    /// A single dip.
    Dip,
    /// One adjacent peak/dip pair.
    Fano,
    /// A dip flanked by two peaks.
    EitLike,
    Other,
}

/// Classifies the extrema lying within `half_width` of `center`.
pub fn classify(extrema: &[Extremum], center: f64, half_width: f64) -> Lineshape {
    use ExtremumKind::*;
    let kinds: Vec<ExtremumKind> =
        extrema.iter().filter(|e| (e.omega - center).abs() <= half_width).map(|e| e.kind).collect();
    match kinds.as_slice() {
        [] => Lineshape::Monotone,
        [Max] => Lineshape::Peak,
        [Min] => Lineshape::Dip,
        [Max, Min] | [Min, Max] => Lineshape::Fano,
        [Max, Min, Max] => Lineshape::EitLike,
        _ => Lineshape::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig3(detuning2: f64) -> NormalizedParams {
        NormalizedParams {
            detuning2,
            detuning3: 0.5,
            kappa: 100.0,
            kappa3: 1.0,
            tunneling: 10.0,
            coupling: 5.0,
            gamma: 1e-5,
            gamma_sc: 0.0,
            n_th: 0.0,
        }
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm()
    }

    #[test]
    fn chi2_on_resonance_is_real() {
        let p = fig3(7.0);
        assert_eq!(chi2(-7.0, &p), Complex64::new(2.0 / 100.0, 0.0));
    }

    #[test]
    fn chi2_reference_value() {
        let p = NormalizedParams { detuning2: 0.0, ..fig3(0.0) };
        // 1/(50 - i) = (50 + i)/2501
        let expected = Complex64::new(50.0 / 2501.0, 1.0 / 2501.0);
        assert!(close(chi2(1.0, &p), expected, 1e-15));
        assert!((chi2(1.0, &p).re - 0.019992).abs() < 1e-7);
        assert!((chi2(1.0, &p).im - 0.00039984).abs() < 1e-9);
    }

    #[test]
    fn chi2_real_part_identity() {
        let p = fig3(13.0);
        for w in [-40.0, -1.0, 0.3, 22.0] {
            let c = chi2(w, &p);
            assert!((c.re - p.kappa / 2.0 * c.norm_sqr()).abs() < 1e-16);
        }
        let wide = NormalizedParams { kappa: 1e300, ..p };
        assert!(chi2(0.0, &wide).norm() < 1e-299);
    }

    #[test]
    fn chi3_and_chi_m_resonances() {
        let p = fig3(0.0);
        assert_eq!(chi3(-0.5, &p), Complex64::new(2.0, 0.0));
        assert_eq!(chi_m(1.0, &p), Complex64::new(2.0 / 1e-5, 0.0));
        let expected = 1.0 / Complex64::new(0.5, -1.5);
        assert!(close(chi3(1.0, &p), expected, 1e-15));
    }

    #[test]
    fn decoupled_total_equals_chi2() {
        let p = fig3(3.0).single_cavity();
        for w in [-2.0, 0.0, 5.5] {
            assert_eq!(chi_total(w, &p), chi2(w, &p));
        }
    }

    #[test]
    fn interference_blocks_at_auxiliary_resonance() {
        let p = NormalizedParams { kappa3: 1e-6, ..fig3(0.0) };
        let c = chi_total(-0.5, &p);
        assert!((c.norm() - p.kappa3 / (2.0 * 100.0)).abs() < 1e-12);
    }

    #[test]
    fn chi_total_fig3_reference() {
        // chi3(-0.5) = 2, so 1/chi = 50 + 0.5i + 200
        let p = fig3(0.0);
        let expected = 1.0 / Complex64::new(250.0, 0.5);
        assert!(close(chi_total(-0.5, &p), expected, 1e-15));
    }

    #[test]
    fn real_part_identity() {
        let p = fig3(100.0);
        for w in [-3.0, -0.5, 0.0, 1.0, 40.0] {
            let c = chi_total(w, &p);
            let c3 = chi3(w, &p);
            let rhs = c.norm_sqr() * (p.kappa + 100.0 * p.kappa3 * c3.norm_sqr());
            assert!((2.0 * c.re - rhs).abs() <= 1e-12 * rhs);
            let s = s_ff(w, &p);
            assert!((s - 2.0 * 25.0 * c.re).abs() <= 1e-12 * s);
        }
    }

    #[test]
    fn zero_coupling_kills_everything() {
        let p = NormalizedParams { coupling: 0.0, ..fig3(1.0) };
        assert_eq!(self_energy(1.0, &p), Complex64::new(0.0, 0.0));
        assert_eq!(s_ff(0.2, &p), 0.0);
    }

    #[test]
    fn zero_detuning_single_cavity_is_symmetric() {
        let p = fig3(0.0).single_cavity();
        for w in [0.1, 1.0, 7.0, 130.0] {
            let (a, b) = (s_ff(w, &p), s_ff(-w, &p));
            assert!((a - b).abs() <= 1e-15 * a);
        }
        assert!(self_energy(1.0, &p).im.abs() < 1e-15);
    }

    #[test]
    fn self_energy_damping_matches_spectrum_asymmetry() {
        let p = fig3(66.0);
        let sigma = self_energy(1.0, &p);
        let asym = s_ff(1.0, &p) - s_ff(-1.0, &p);
        assert!((-2.0 * sigma.im - asym).abs() <= 1e-10 * asym.abs());
        // the same-frequency variant is purely real and carries no damping
        let printed = self_energy_with(1.0, &p, SelfEnergyConvention::SameFrequencyConjugate);
        assert!(printed.im.abs() < 1e-15);
    }

    #[test]
    fn grid_must_increase() {
        let p = fig3(0.0);
        assert!(spectrum_scan(&[0.0, 1.0, 1.0], &p).is_err());
        assert!(spectrum_scan(&[0.0, -1.0], &p).is_err());
        assert_eq!(spectrum_scan(&[], &p).unwrap().len(), 0);
        assert!(uniform_grid(1.0, 0.0, 10).is_err());
        let g = uniform_grid(-1.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn lorentzian_has_one_peak_at_minus_detuning() {
        let p = fig3(-30.0).single_cavity();
        let grid = uniform_grid(-200.0, 200.0, DEFAULT_GRID_POINTS).unwrap();
        let ex = find_extrema(&spectrum_scan(&grid, &p).unwrap()).unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].kind, ExtremumKind::Max);
        assert!((ex[0].omega - 30.0).abs() < 0.1);
    }

    #[test]
    fn fig3_detail_lineshapes() {
        let grid = uniform_grid(-20.5, 19.5, DEFAULT_GRID_POINTS).unwrap();
        let shape = |d2: f64| {
            let s = spectrum_scan(&grid, &fig3(d2)).unwrap();
            classify(&find_extrema(&s).unwrap(), -0.5, 20.0)
        };
        assert_eq!(shape(0.0), Lineshape::EitLike);
        assert_eq!(shape(100.0), Lineshape::Fano);
        assert_eq!(shape(-100.0), Lineshape::Fano);
    }

    #[test]
    fn coarse_grid_is_reported() {
        let samples: Vec<SpectrumSample> =
            [0.0, 1.0, 0.0, 1.0, 0.0].iter().enumerate().map(|(i, &s)| SpectrumSample { omega: i as f64, s }).collect();
        assert!(matches!(find_extrema(&samples), Err(Error::GridTooCoarse { .. })));
        let plateau: Vec<SpectrumSample> =
            [0.0, 1.0, 1.0, 0.5].iter().enumerate().map(|(i, &s)| SpectrumSample { omega: i as f64, s }).collect();
        assert!(find_extrema(&plateau).is_err());
    }

    #[test]
    fn parabolic_refinement_is_exact_for_parabola() {
        let samples: Vec<SpectrumSample> = (0..7)
            .map(|i| {
                let w = i as f64 * 0.5;
                SpectrumSample { omega: w, s: 4.0 - (w - 1.3).powi(2) }
            })
            .collect();
        let ex = find_extrema(&samples).unwrap();
        assert_eq!(ex.len(), 1);
        assert!((ex[0].omega - 1.3).abs() < 1e-12);
    }
}
