//! Deterministic quadrature and ODE integration that respect breakpoints.
//!
//! All numerical error in the crate originates here: device laws are exact
//! algebra on top of [`integrate`] and [`solve_ode`].

mod ode;
mod quadrature;
mod roots;

pub use ode::{solve_ode, OdeSolution, OdeSpec};
pub use quadrature::{composite_simpson, integrate, Quadrature, QuadratureSpec};
pub use roots::sign_changes;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    NoConvergence { estimate: f64, error: f64 },
    #[error("integrand is not finite at t = {0}")]
    NonFinite(f64),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("invalid numerical settings: {0}")]
    InvalidSpec(&'static str),
    #[error("ODE refinement limit reached after {refinements} halvings (discrepancy {discrepancy:e})")]
    OdeNotConverged { refinements: u32, discrepancy: f64 },
}

impl NumericsError {
    /// Best available estimate carried by a non-convergence error.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            NumericsError::NoConvergence { estimate, .. } => Some(*estimate),
            _ => None,
        }
    }
}

/// Sorted, deduplicated breakpoints strictly inside `(t0, t1)`, bracketed by
/// `t0` and `t1`.
pub(crate) fn piece_grid(t0: f64, t1: f64, breakpoints: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|b| *b > t0 && *b < t1)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid.insert(0, t0);
    grid.push(t1);
    grid
}
