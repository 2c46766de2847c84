use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated its documented invariant.
    #[error("invalid parameter: {0}")]
    Validation(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("mean-field iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("trap drive E1 is zero; no restoring force")]
    TrapAbsent,

    #[error("grid too coarse to resolve extremum near omega = {omega}")]
    GridTooCoarse { omega: f64 },

    #[error("net optical damping is not positive (Gamma_opt = {gamma_opt:.6e})")]
    NotCooling { gamma_opt: f64 },

    #[error("no detuning in the scanned window gives net cooling")]
    NoCoolingWindow,

    #[error("drift matrix is unstable (max Re lambda = {max_real_eigenvalue:.6e})")]
    Unstable { max_real_eigenvalue: f64 },

    #[error("Lyapunov solve ill-conditioned (relative residual {residual:.3e})")]
    IllConditioned { residual: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    /// True for errors caused by bad input rather than by numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Config { .. } | Error::UnknownKey(_))
    }
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}
