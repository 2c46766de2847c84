//! Classical mean fields of the three driven modes and the sphere.
//!
//! The only nonlinearity is the static displacement `x0`, which shifts the
//! cooling-mode detuning to `Delta'_2 = Delta_2 + 2 g k x0`. For fixed `x0`
//! the cavity amplitudes follow from a 2x2 linear system, so the solver is a
//! damped scalar fixed-point iteration on `x0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{self, NormalizedParams, PhysicalParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Mean-field linearization point.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// Field amplitudes of the trap, cooling and auxiliary modes.
    pub alpha: [Complex64; 3],
    /// Static displacement (m).
    pub x0: f64,
    /// Mean momentum, identically zero at the fixed point.
    pub p0: f64,
    /// Effective cooling-mode detuning `Delta'_2` (rad/s).
    pub detuning2: f64,
    /// Effective optomechanical coupling `Omega_m = 2 g k x_zpf alpha_2` (rad/s).
    pub coupling: Complex64,
    pub converged: bool,
    pub iterations: usize,
    /// Largest relative residual of the four mean-field equations.
    pub residual: f64,
    /// False when another fixed point of the `x0` map was detected.
    pub unique: bool,
}

impl SteadyState {
    /// A linearization point given directly by `Delta'_2` and `Omega_m`
    /// (both rad/s), bypassing the mean-field solve.
    pub fn prescribed(detuning2: f64, coupling: Complex64) -> Self {
        SteadyState {
            alpha: [Complex64::new(0.0, 0.0); 3],
            x0: 0.0,
            p0: 0.0,
            detuning2,
            coupling,
            converged: true,
            iterations: 0,
            residual: 0.0,
            unique: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Weight of the new iterate in `x <- (1 - r) x + r map(x)`.
    pub relaxation: f64,
    /// Convergence threshold on `|dx0 / x0|`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { relaxation: 0.5, tolerance: 1e-12, max_iterations: 10_000 }
    }
}

/// Frozen quantities of one mean-field problem.
struct MeanField<'a> {
    phys: &'a PhysicalParams,
    g: f64,
    k: f64,
    alpha1: Complex64,
}

impl<'a> MeanField<'a> {
    fn new(phys: &'a PhysicalParams) -> Result<Self> {
        phys.validate()?;
        if phys.detunings[0] != 0.0 {
            return Err(Error::Validation(format!("trap detuning Delta1 must be 0, got {}", phys.detunings[0])));
        }
        let e1 = phys.drives[0];
        if e1.norm() == 0.0 {
            return Err(Error::TrapAbsent);
        }
        Ok(MeanField { phys, g: params::coupling_g(phys)?, k: phys.wavenumber(), alpha1: -2.0 * I * e1 / phys.kappa })
    }

    /// Detuning shift per metre of displacement, `2 g k`.
    fn shift_per_metre(&self) -> f64 {
        2.0 * self.g * self.k
    }

    /// Cooling and auxiliary amplitudes at effective detuning `delta2p`.
    fn cavity_fields(&self, delta2p: f64) -> (Complex64, Complex64) {
        let p = self.phys;
        let m11 = I * delta2p - p.kappa / 2.0;
        let m12 = -I * p.tunneling;
        let m21 = -I * p.tunneling.conj();
        let m22 = I * p.detunings[2] - p.kappa3 / 2.0;
        let r1 = I * p.drives[1];
        let r2 = I * p.drives[2];
        let det = m11 * m22 - m12 * m21;
        ((r1 * m22 - m12 * r2) / det, (m11 * r2 - m21 * r1) / det)
    }

    fn detuning_at(&self, x0: f64) -> f64 {
        self.phys.detunings[1] + self.shift_per_metre() * x0
    }

    /// The displacement balancing radiation pressure against the trap.
    fn map(&self, x0: f64) -> f64 {
        let (a2, _) = self.cavity_fields(self.detuning_at(x0));
        a2.norm_sqr() / (2.0 * self.k * self.alpha1.norm_sqr())
    }

    fn residual(&self, alpha: &[Complex64; 3], x0: f64) -> f64 {
        let p = self.phys;
        let scale = p.drives.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let d2 = self.detuning_at(x0);
        let r1 = -p.kappa / 2.0 * alpha[0] - I * p.drives[0];
        let r2 = (I * d2 - p.kappa / 2.0) * alpha[1] - I * p.tunneling * alpha[2] - I * p.drives[1];
        let r3 = (I * p.detunings[2] - p.kappa3 / 2.0) * alpha[2] - I * p.tunneling.conj() * alpha[1] - I * p.drives[2];
        let trap = 4.0 * self.g * self.k * self.k * alpha[0].norm_sqr() * x0;
        let push = 2.0 * self.g * self.k * alpha[1].norm_sqr();
        let force = if trap.abs() + push > 0.0 { (push - trap).abs() / (trap.abs() + push) } else { 0.0 };
        [r1.norm() / scale, r2.norm() / scale, r3.norm() / scale, force].into_iter().fold(0.0, f64::max)
    }

    fn iterate(&self, seed: f64, opts: &SolverOptions) -> (f64, usize, bool) {
        let r = opts.relaxation;
        let mut x = seed;
        for it in 1..=opts.max_iterations {
            let next = (1.0 - r) * x + r * self.map(x);
            let step = (next - x).abs();
            x = next;
            if step <= opts.tolerance * x.abs() || (step == 0.0 && x == 0.0) {
                return (x, it, true);
            }
        }
        (x, opts.max_iterations, false)
    }

    /// Looks for a second root of `map(x) - x` above `x_star`.
    ///
    /// Roots are parameterized by the detuning they produce; above the
    /// returned branch `map(x) > x` anywhere signals another crossing.
    fn has_other_branch(&self, x_star: f64) -> bool {
        let p = self.phys;
        let width = p.kappa.min(p.kappa3) / 8.0;
        let reach = p.detunings[1].abs() + p.detunings[2].abs() + 10.0 * (p.kappa + p.kappa3 + p.tunneling.norm());
        let peak_points = ((2.0 * reach / width).ceil() as usize).clamp(2_000, 1_000_000);
        let peak = (0..=peak_points)
            .map(|i| {
                let d = -reach + 2.0 * reach * i as f64 / peak_points as f64;
                self.cavity_fields(d).0.norm_sqr()
            })
            .fold(0.0, f64::max);
        let x_cap = 1.5 * peak / (2.0 * self.k * self.alpha1.norm_sqr());
        if x_cap <= x_star {
            return false;
        }
        let b = self.shift_per_metre();
        let span = b * (x_cap - x_star);
        let n = ((span / width).ceil() as usize).clamp(1_000, 2_000_000);
        (1..=n).any(|i| {
            let x = x_star + (x_cap - x_star) * i as f64 / n as f64;
            self.map(x) > x * (1.0 + 1e-9)
        })
    }
}

/// Solves the mean-field equations with default [`SolverOptions`].
pub fn solve_mean_fields(phys: &PhysicalParams) -> Result<SteadyState> {
    solve_mean_fields_with(phys, &SolverOptions::default())
}

pub fn solve_mean_fields_with(phys: &PhysicalParams, opts: &SolverOptions) -> Result<SteadyState> {
    let mf = MeanField::new(phys)?;
    let (x0, iterations, converged) = mf.iterate(0.0, opts);
    let detuning2 = mf.detuning_at(x0);
    let (a2, a3) = mf.cavity_fields(detuning2);
    let alpha = [mf.alpha1, a2, a3];
    let residual = mf.residual(&alpha, x0);
    if !converged {
        return Err(Error::NonConvergence { iterations, residual });
    }
    let zpf = params::x_zpf(phys)?;
    Ok(SteadyState {
        alpha,
        x0,
        p0: 0.0,
        detuning2,
        coupling: 2.0 * mf.g * mf.k * zpf * a2,
        converged,
        iterations,
        residual,
        unique: !mf.has_other_branch(x0),
    })
}

/// The dimensionless linearization point for a converged mean-field state.
pub fn linear_point(ss: &SteadyState, phys: &PhysicalParams) -> Result<NormalizedParams> {
    if !ss.converged {
        return Err(Error::NonConvergence { iterations: ss.iterations, residual: ss.residual });
    }
    params::normalize(phys, ss)
}

/// Mechanical frequency implied by the trap field, `sqrt(4 g k^2 |alpha_1|^2 / m)`.
pub fn trap_frequency(phys: &PhysicalParams, ss: &SteadyState) -> Result<f64> {
    let g = params::coupling_g(phys)?;
    let k = phys.wavenumber();
    Ok((4.0 * g * k * k * ss.alpha[0].norm_sqr() / phys.mass()).sqrt())
}

/// Finds `|E2|` (phase of `E2` kept) such that the normalized coupling
/// `|Omega_m| / omega_m` equals `target`. Assumes the coupling grows with
/// `|E2|`, which holds unless `E3` interferes destructively.
pub fn drive_for_coupling(phys: &PhysicalParams, target: f64) -> Result<(PhysicalParams, SteadyState)> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::Validation(format!("target coupling must be positive, got {target}")));
    }
    let phase =
        if phys.drives[1].norm() > 0.0 { phys.drives[1] / phys.drives[1].norm() } else { Complex64::new(1.0, 0.0) };
    let solve_at = |mag: f64| -> Result<(PhysicalParams, SteadyState, f64)> {
        let mut trial = phys.clone();
        trial.drives[1] = phase * mag;
        let ss = solve_mean_fields(&trial)?;
        let c = ss.coupling.norm() / trial.omega_m;
        Ok((trial, ss, c))
    };

    let (_, _, c0) = solve_at(0.0)?;
    if c0 >= target {
        return Err(Error::Validation(format!("coupling {c0} already exceeds target {target} with E2 = 0")));
    }
    let mut lo = 0.0;
    let mut hi = phys.omega_m;
    let mut bracketed = false;
    for _ in 0..400 {
        if solve_at(hi)?.2 >= target {
            bracketed = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !bracketed {
        return Err(Error::Validation(format!("no E2 magnitude reaches coupling {target}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if solve_at(mid)?.2 < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let (trial, ss, _) = solve_at(0.5 * (lo + hi))?;
    Ok((trial, ss))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn driven(e1: f64, e2: f64, e3: f64) -> PhysicalParams {
        let mut p = PhysicalParams::silica_reference();
        p.drives = [Complex64::new(e1, 0.0), Complex64::new(e2, 0.0), Complex64::new(0.0, e3)];
        p.detunings = [0.0, -0.5 * p.kappa, 0.5 * p.omega_m];
        p.tunneling = Complex64::new(10.0 * p.omega_m, 0.0);
        p
    }

    #[test]
    fn undriven_cooling_modes_stay_empty() {
        let p = driven(1e12, 0.0, 0.0);
        let ss = solve_mean_fields(&p).unwrap();
        assert_eq!(ss.alpha[1], Complex64::new(0.0, 0.0));
        assert_eq!(ss.alpha[2], Complex64::new(0.0, 0.0));
        assert_eq!(ss.x0, 0.0);
        assert_eq!(ss.alpha[0], -2.0 * I * p.drives[0] / p.kappa);
        assert!(ss.unique);
    }

    #[test]
    fn momentum_is_zero() {
        let ss = solve_mean_fields(&driven(1e12, 3e11, 1e9)).unwrap();
        assert_eq!(ss.p0, 0.0);
    }

    #[test]
    fn residual_and_fixed_point() {
        let p = driven(1e12, 3e11, 1e9);
        let ss = solve_mean_fields(&p).unwrap();
        assert!(ss.converged);
        assert!(ss.residual < 1e-10, "residual {}", ss.residual);
        let mf = MeanField::new(&p).unwrap();
        let x1 = mf.map(ss.x0);
        assert!((x1 - ss.x0).abs() <= 1e-10 * ss.x0);
        let g = params::coupling_g(&p).unwrap();
        let expected = p.detunings[1] + 2.0 * g * p.wavenumber() * ss.x0;
        assert!((ss.detuning2 - expected).abs() <= 1e-12 * expected.abs());
        // x0 = |alpha2|^2 / (2 k |alpha1|^2)
        let x_formula = ss.alpha[1].norm_sqr() / (2.0 * p.wavenumber() * ss.alpha[0].norm_sqr());
        assert!((x_formula - ss.x0).abs() <= 1e-10 * ss.x0);
    }

    #[test]
    fn weak_feedback_matches_one_shot_estimate() {
        let p = driven(1e13, 3e11, 0.0);
        // one-shot: amplitudes at x0 = 0, then the force balance once
        let k = p.wavenumber();
        let a1 = -2.0 * I * p.drives[0] / p.kappa;
        let m11 = I * p.detunings[1] - p.kappa / 2.0;
        let m22 = I * p.detunings[2] - p.kappa3 / 2.0;
        let det = m11 * m22 - (-I * p.tunneling) * (-I * p.tunneling.conj());
        let a2 = (I * p.drives[1] * m22) / det;
        let x_est = a2.norm_sqr() / (2.0 * k * a1.norm_sqr());

        let ss = solve_mean_fields(&p).unwrap();
        let shift = 2.0 * params::coupling_g(&p).unwrap() * k * ss.x0;
        assert!(shift < 1e-3 * p.kappa);
        assert!((ss.x0 - x_est).abs() < 0.01 * x_est);
    }

    #[test]
    fn trap_absent() {
        assert!(matches!(solve_mean_fields(&driven(0.0, 1e10, 0.0)), Err(Error::TrapAbsent)));
    }

    #[test]
    fn nonzero_trap_detuning_rejected() {
        let mut p = driven(1e12, 1e10, 0.0);
        p.detunings[0] = 1.0;
        assert!(solve_mean_fields(&p).unwrap_err().is_validation());
    }

    #[test]
    fn iteration_cap_reports_nonconvergence() {
        let p = driven(1e12, 3e11, 1e9);
        let opts = SolverOptions { max_iterations: 2, ..SolverOptions::default() };
        assert!(matches!(solve_mean_fields_with(&p, &opts), Err(Error::NonConvergence { iterations: 2, .. })));
    }

    #[test]
    fn restoring_force_identity() {
        let mut p = driven(1e12, 3e11, 1e9);
        let ss = solve_mean_fields(&p).unwrap();
        p.omega_m = trap_frequency(&p, &ss).unwrap();
        let g = params::coupling_g(&p).unwrap();
        let k = p.wavenumber();
        let lhs = p.mass() * p.omega_m * p.omega_m;
        let rhs = 4.0 * g * k * k * ss.alpha[0].norm_sqr();
        assert!((lhs - rhs).abs() <= 1e-10 * rhs);
    }

    #[test]
    fn coupling_scales_with_alpha2() {
        let p = driven(1e13, 1e11, 0.0);
        let q = driven(1e13, 2e11, 0.0);
        let a = linear_point(&solve_mean_fields(&p).unwrap(), &p).unwrap();
        let b = linear_point(&solve_mean_fields(&q).unwrap(), &q).unwrap();
        // x0 feedback is negligible here, so |alpha2| doubles
        assert!((b.coupling / a.coupling - 2.0).abs() < 1e-4);
        let z = driven(1e13, 0.0, 0.0);
        let c = linear_point(&solve_mean_fields(&z).unwrap(), &z).unwrap();
        assert_eq!(c.coupling, 0.0);
    }

    #[test]
    fn linear_point_requires_convergence() {
        let mut ss = SteadyState::prescribed(0.0, Complex64::new(1.0, 0.0));
        ss.converged = false;
        assert!(linear_point(&ss, &PhysicalParams::silica_reference()).is_err());
    }

    #[test]
    fn inverse_search_hits_quarter_coupling() {
        let p = driven(1e13, 1e9, 0.0);
        let (tuned, ss) = drive_for_coupling(&p, 0.25).unwrap();
        let lp = linear_point(&ss, &tuned).unwrap();
        assert!((lp.coupling - 0.25).abs() < 1e-10, "{}", lp.coupling);
        assert!(tuned.drives[1].re > 0.0);
    }

    #[test]
    fn strong_feedback_flags_second_branch() {
        // J = 0, Delta2 = -10 kappa, g |E2|^2 / |alpha1|^2 = 50 kappa^3:
        // the Kerr-like x0 feedback has three fixed points.
        let mut p = PhysicalParams::silica_reference();
        let g = params::coupling_g(&p).unwrap();
        let kappa = p.kappa;
        p.drives[0] = Complex64::new(kappa / 2.0, 0.0);
        p.drives[1] = Complex64::new((50.0 * kappa.powi(3) / g).sqrt(), 0.0);
        p.detunings[1] = -10.0 * kappa;
        let ss = solve_mean_fields(&p).unwrap();
        assert!(!ss.unique);
        // the lower branch is returned
        let shift = ss.detuning2 - p.detunings[1];
        assert!(shift > 0.0 && shift < kappa, "shift {}", shift / kappa);

        p.drives[1] = Complex64::new((0.1 * kappa.powi(3) / g).sqrt(), 0.0);
        assert!(solve_mean_fields(&p).unwrap().unique);
    }
}
