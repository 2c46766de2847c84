//! Exact steady state of the linearized three-mode model.
//!
//! Quadratures are ordered `(X2, Y2, X3, Y3, q, p)` with
//! `X = (a + a^dag)/sqrt 2`, `Y = (a - a^dag)/(i sqrt 2)`, so the vacuum
//! variance of each quadrature is 1/2. The covariance obeys
//! `A V + V A^T + D = 0` once the drift `A` is stable.

use nalgebra::{DMatrix, DVector, Matrix6};
use num_complex::Complex64;

use crate::cooling;
use crate::error::{Error, Result};
use crate::params::NormalizedParams;

/// Index of the mechanical position quadrature.
pub const Q: usize = 4;
/// Index of the mechanical momentum quadrature.
pub const P: usize = 5;

/// Relative Lyapunov residual above which a solve is rejected.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub drift: Matrix6<f64>,
    pub diffusion: Matrix6<f64>,
}

/// Drift and diffusion of the quadrature Langevin equations.
///
/// Cavity inputs are vacuum; the sphere sees a Markovian bath at
/// occupancy `n_th` through amplitude damping `gamma/2`, plus recoil
/// diffusion normalized so that the uncoupled occupancy grows at
/// `dn/dt = gamma_sc`.
pub fn build_model(p: &NormalizedParams) -> LinearModel {
    let (k, k3, g) = (p.kappa / 2.0, p.kappa3 / 2.0, p.gamma / 2.0);
    let (d2, d3, j, c) = (p.detuning2, p.detuning3, p.tunneling, 2.0 * p.coupling);
    #[rustfmt::skip]
    let drift = Matrix6::new(
        -k,  -d2, 0.0,  j,   0.0, 0.0,
        d2,  -k,  -j,   0.0, c,   0.0,
        0.0, j,   -k3,  -d3, 0.0, 0.0,
        -j,  0.0, d3,   -k3, 0.0, 0.0,
        0.0, 0.0, 0.0,  0.0, -g,  1.0,
        c,   0.0, 0.0,  0.0, -1.0, -g,
    );
    let mech = p.gamma * (p.n_th + 0.5) + p.gamma_sc;
    let diffusion = Matrix6::from_diagonal(&nalgebra::Vector6::new(k, k, k3, k3, mech, mech));
    LinearModel { drift, diffusion }
}

impl LinearModel {
    /// Frequency-domain transfer matrix `(-i w I - A)^-1`.
    pub fn transfer(&self, omega: f64) -> Option<Matrix6<Complex64>> {
        let a = self.drift.map(|x| Complex64::new(x, 0.0));
        let m = Matrix6::<Complex64>::identity() * Complex64::new(0.0, -omega) - a;
        m.try_inverse()
    }

    /// Frobenius norm of `A V + V A^T + D` relative to that of `D`.
    pub fn lyapunov_residual(&self, v: &Matrix6<f64>) -> f64 {
        let r = self.drift * v + v * self.drift.transpose() + self.diffusion;
        r.norm() / self.diffusion.norm().max(f64::MIN_POSITIVE)
    }
}

/// Whether every drift eigenvalue has negative real part, and the largest
/// real part.
pub fn eigen_stable(model: &LinearModel) -> (bool, f64) {
    let max_re = model.drift.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    (max_re < 0.0, max_re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceResult {
    pub covariance: Matrix6<f64>,
    /// `(V_qq + V_pp - 1) / 2`
    pub n_phonon: f64,
    pub stable: bool,
    pub max_real_eigenvalue: f64,
    pub residual: f64,
}

/// Solves `A V + V A^T + D = 0` by vectorization:
/// `(I (x) A + A (x) I) vec V = -vec D`.
pub fn solve_steady(model: &LinearModel) -> Result<CovarianceResult> {
    let (stable, max_re) = eigen_stable(model);
    if !stable {
        return Err(Error::Unstable { max_real_eigenvalue: max_re });
    }
    const N: usize = 6;
    let mut kron = DMatrix::<f64>::zeros(N * N, N * N);
    for col in 0..N {
        for row in 0..N {
            let eq = col * N + row;
            // (A V)_{row,col} = sum_k A[row,k] V[k,col]
            for k in 0..N {
                kron[(eq, col * N + k)] += model.drift[(row, k)];
            }
            // (V A^T)_{row,col} = sum_k V[row,k] A[col,k]
            for k in 0..N {
                kron[(eq, k * N + row)] += model.drift[(col, k)];
            }
        }
    }
    let rhs = DVector::from_iterator(N * N, model.diffusion.iter().map(|x| -x));
    let sol = kron.lu().solve(&rhs).ok_or(Error::IllConditioned { residual: f64::INFINITY })?;
    let raw = Matrix6::from_column_slice(sol.as_slice());
    let covariance = (raw + raw.transpose()) * 0.5;
    let residual = model.lyapunov_residual(&covariance);
    if residual.is_nan() || residual > RESIDUAL_TOLERANCE {
        return Err(Error::IllConditioned { residual });
    }
    Ok(CovarianceResult {
        n_phonon: (covariance[(Q, Q)] + covariance[(P, P)] - 1.0) / 2.0,
        covariance,
        stable,
        max_real_eigenvalue: max_re,
        residual,
    })
}

/// Perturbative phonon limit against the exact covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    /// `(A_+ + gamma_sc) / Gamma_opt`
    pub n_formula: f64,
    /// `(A_+ + gamma_sc) / (Gamma_opt + gamma)`: the same estimate with the
    /// intrinsic damping the closed form leaves out of its denominator.
    pub n_formula_damped: f64,
    pub n_lyapunov: f64,
    /// `|n_formula - n_lyapunov| / n_lyapunov`
    pub rel_dev: f64,
    pub stable: bool,
    pub max_real_eigenvalue: f64,
}

/// Compares the closed-form phonon limit with the Lyapunov occupancy. The
/// bath occupancy is set to zero on both sides.
pub fn oracle_compare(p: &NormalizedParams) -> Result<OracleReport> {
    let cold = NormalizedParams { n_th: 0.0, ..*p };
    let report = cooling::cooling_limit(&cold)?;
    let cov = solve_steady(&build_model(&cold))?;
    let n_formula = report.n_f;
    let rel_dev = if cov.n_phonon != 0.0 {
        (n_formula - cov.n_phonon).abs() / cov.n_phonon
    } else if n_formula == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(OracleReport {
        n_formula,
        n_formula_damped: (report.a_plus + cold.gamma_sc) / (report.gamma_opt + cold.gamma),
        n_lyapunov: cov.n_phonon,
        rel_dev,
        stable: cov.stable,
        max_real_eigenvalue: cov.max_real_eigenvalue,
    })
}
