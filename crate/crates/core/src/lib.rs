//! Cooling of a levitated nanosphere with a coupled auxiliary cavity:
//! mean fields, linear response, cooling limits, two-mode reduction and a
//! covariance-matrix cross-check.

pub mod cli;
pub mod config;
pub mod cooling;
pub mod error;
pub mod lyapunov;
pub mod output;
pub mod params;
pub mod presets;
pub mod reduction;
pub mod response;
pub mod selftest;
pub mod steadystate;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{NormalizedParams, PhysicalParams};
