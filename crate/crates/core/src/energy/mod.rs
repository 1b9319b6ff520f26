//! Energy accounting, cycle checks, passivity falsification and
//! losslessness verification.

mod cycle;
mod family;
mod lossless;

use thiserror::Error;

use crate::devices::{DeviceError, LawKind, Parameter, PortBehaviour, PortState};
use crate::numerics::{integrate, NumericsError, QuadratureSpec};
use crate::signals::{PiecewiseSignal, Side, SignalError};

pub use cycle::{check_cycle_conditions, CycleEntry, CycleReport, MAX_CYCLE_ORDER};
pub use family::{
    falsify_passivity, ActivityCertificate, FamilyMember, IndexedFamily, InputRole,
    RepeatedCycle, TrajectoryFamily, TrendFit, Verdict, CYCLE_TOL, ENERGY_TOL,
};
pub use lossless::{
    balance_residual, verify_losslessness, BalanceAudit, LosslessCase, LosslessReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("law {0} has no internal energy functional")]
    NotLossless(LawKind),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
}

/// `∫ F·ẋ dt` over `[t0, t1]` along a port trajectory.
pub fn terminal_energy(
    port: &dyn PortBehaviour,
    t0: f64,
    t1: f64,
    spec: &QuadratureSpec,
) -> Result<f64, EnergyError> {
    let bps = port.quadrature_nodes();
    Ok(integrate(|t| port.sample(t, Side::Right).power(), t0, t1, &bps, spec)?.value)
}

/// `∫ F·ẋ dt` for explicitly given through and rate signals.
pub fn signal_energy(
    force: &PiecewiseSignal,
    rate: &PiecewiseSignal,
    t0: f64,
    t1: f64,
    spec: &QuadratureSpec,
) -> Result<f64, EnergyError> {
    let mut bps = force.breakpoints();
    bps.extend(rate.breakpoints());
    let q = integrate(
        |t| force.at(t, 0, Side::Right) * rate.at(t, 0, Side::Right),
        t0,
        t1,
        &bps,
        spec,
    )?;
    Ok(q.value)
}

/// Stored energy of a lossless law in the given port state.
pub fn internal_energy(kind: LawKind, state: &PortState) -> Result<f64, EnergyError> {
    let u = state.parameter.ok_or(EnergyError::NotLossless(kind))?;
    match kind {
        LawKind::VarspringOde | LawKind::VarspringIntegral => Ok(0.5 * (state.through / u).powi(2)),
        LawKind::VarspringDual | LawKind::Varinductor => Ok(0.5 * (u * state.through).powi(2)),
        LawKind::Varinerter | LawKind::Varcapacitor => Ok(0.5 * (u * state.rate).powi(2)),
        other => Err(EnergyError::NotLossless(other)),
    }
}

/// Cycle energy of an active law predicted by its closed form, valid when
/// the state quantity and the parameter return to their initial values.
///
/// Spring laws use `x`, inerter laws and the variable capacitor use `ẋ`,
/// the variable inductor uses `i`; `input` is that quantity.
pub fn closed_form_cycle_energy(
    kind: LawKind,
    parameter: &Parameter,
    input: &PiecewiseSignal,
    t0: f64,
    t1: f64,
    spec: &QuadratureSpec,
) -> Result<Option<f64>, EnergyError> {
    let factor = match kind {
        LawKind::DirectSpring | LawKind::DirectInerter => -0.5,
        LawKind::SmoothingSpring
        | LawKind::FlyweightInerter
        | LawKind::VariableCapacitor
        | LawKind::VariableInductor => 0.5,
        LawKind::SemiSmoothingSpring => return Ok(Some(0.0)),
        LawKind::UpSmoothingSpring => {
            let mut bps = parameter.breakpoints();
            bps.extend(input.breakpoints());
            let q = integrate(
                |t| 0.5 * parameter.jet(t, Side::Right).d1().abs() * input.at(t, 0, Side::Right).powi(2),
                t0,
                t1,
                &bps,
                spec,
            )?;
            return Ok(Some(q.value));
        }
        _ => return Ok(None),
    };
    Ok(Some(factor * weighted_square(parameter, input, t0, t1, spec)?))
}

/// `∫ u̇·s²` over `[t0, t1]`.
pub fn weighted_square(
    parameter: &Parameter,
    s: &PiecewiseSignal,
    t0: f64,
    t1: f64,
    spec: &QuadratureSpec,
) -> Result<f64, EnergyError> {
    let mut bps = parameter.breakpoints();
    bps.extend(s.breakpoints());
    let q = integrate(
        |t| parameter.jet(t, Side::Right).d1() * s.at(t, 0, Side::Right).powi(2),
        t0,
        t1,
        &bps,
        spec,
    )?;
    Ok(q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::{Drive, OnePortLaw};
    use crate::signals::{polynomial_pieces, Segment};

    #[test]
    fn internal_energy_formulas() {
        let mut s = PortState {
            t: 0.0,
            position: None,
            rate: 0.0,
            accel: None,
            through: 3.0,
            through_rate: None,
            parameter: Some(2.0),
            internal: None,
        };
        assert_eq!(internal_energy(LawKind::VarspringOde, &s).unwrap(), 9.0 / 8.0);
        assert_eq!(internal_energy(LawKind::Varinerter, &s).unwrap(), 0.0);
        s.through = 1.0;
        assert_eq!(internal_energy(LawKind::Varinductor, &s).unwrap(), 2.0);
        assert!(matches!(
            internal_energy(LawKind::DirectSpring, &s),
            Err(EnergyError::NotLossless(LawKind::DirectSpring))
        ));
    }

    #[test]
    fn example_one_energy_two_ways() {
        let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        let k = polynomial_pieces(&[
            (&[2.0, -1.0], (0.0, 1.0)),
            (&[1.0], (1.0, 2.0)),
            (&[-1.0, 1.0], (2.0, 3.0)),
            (&[2.0], (3.0, 4.0)),
        ])
        .unwrap();
        let spec = QuadratureSpec::default();
        let k = Parameter::from(k);
        assert!((weighted_square(&k, &x, 0.0, 4.0, &spec).unwrap() - 2.0).abs() < 1e-14);
        let run = OnePortLaw::new(LawKind::DirectSpring, k.clone())
            .drive(Drive::Position(x.clone()))
            .unwrap();
        let e = terminal_energy(&run, 0.0, 4.0, &spec).unwrap();
        assert!((e + 1.0).abs() < 1e-12);
        let closed = closed_form_cycle_energy(LawKind::DirectSpring, &k, &x, 0.0, 4.0, &spec)
            .unwrap()
            .unwrap();
        assert!((e - closed).abs() < 1e-12);
    }

    #[test]
    fn zero_force_supplies_nothing() {
        let zero = PiecewiseSignal::constant(0.0, (0.0, 1.0)).unwrap();
        let v = PiecewiseSignal::from_segment(Segment::sinusoid(0.0, 1.0, 3.0, 0.0, (0.0, 1.0)).unwrap());
        assert_eq!(signal_energy(&zero, &v, 0.0, 1.0, &QuadratureSpec::default()).unwrap(), 0.0);
    }
}
