//! Kinematics of the physical constructions: the lever with a moveable
//! fulcrum, the opposed-cone rotary transformer and coupled coils.

mod coils;
mod cone;
mod lever;

use thiserror::Error;

use crate::devices::DeviceError;
use crate::numerics::NumericsError;
use crate::signals::SignalError;

pub use coils::{coupled_coils_drift, coupled_coils_energy, CoilConfig, CoilDrift, CoilEnergy, CoilSample};
pub use cone::{cone_ratio, ConeGeometry};
pub use lever::{
    fulcrum_trajectory, fulcrum_travel_report, max_moment_residuals, max_parallel_residual,
    moment_balance_residual, parallel_residual, FulcrumRun, LeverConfig, MomentResidual,
    PivotPath, PivotState, PrescribedPivot, TravelReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MechanismError {
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("assembly position {value} leaves [0, {limit}] near t = {t}")]
    OutOfRange { t: f64, value: f64, limit: f64 },
}
