//! Device laws: the six active adjustable spring/inerter laws, the lossless
//! varspring/varinerter family with its electrical analogues, and adjustable
//! two-port transformers.
//!
//! Every one-port is described in mechanical terms: a through-variable
//! `F` (force, torque, or current under the force–current analogy) and an
//! across-variable whose rate is `ẋ` (velocity, angular velocity, or
//! voltage). Positive `F·ẋ` is power delivered into the device.

mod laws;
mod parameter;
mod sim;
mod trajectory;
mod transformer;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{NumericsError, OdeSpec, QuadratureSpec};
use crate::signals::{Observable, PiecewiseSignal, Side, SignalError};

pub use laws::*;
pub use parameter::Parameter;
pub use sim::SimResult;
pub use trajectory::Trajectory;
pub use transformer::{
    ideal_transformer, motor_generator_map, parallel_plate_capacitance, terminate_transformer,
    PortPair, TerminalElement, TerminatedTransformer, TransformedPort, TwoPortKind, TwoPortLaw,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeviceError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("parameter must be strictly positive; found {value} at t = {t}")]
    NonPositiveParameter { t: f64, value: f64 },
    #[error("signals cover [{have_start}, {have_end}] but the run needs [{need_start}, {need_end}]")]
    DomainMismatch {
        need_start: f64,
        need_end: f64,
        have_start: f64,
        have_end: f64,
    },
    #[error("law {law} cannot be driven by a {drive} signal")]
    DriveMismatch { law: LawKind, drive: &'static str },
    #[error("law {0} has no internal energy functional")]
    NotLossless(LawKind),
    #[error("unknown law id '{0}'")]
    UnknownLaw(String),
    #[error("cannot terminate a {kind:?} transformer with a {element:?}")]
    UnsupportedTermination {
        kind: TwoPortKind,
        element: TerminalElement,
    },
    #[error("motor-generator constants must be equal and positive (kE = {ke}, kT = {kt})")]
    ConstantMismatch { ke: f64, kt: f64 },
    #[error("law {0} is not a rotary varspring or varinerter")]
    NotRotary(LawKind),
    #[error("{0}")]
    InvalidInput(String),
}

/// Identifier of a one-port device law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    DirectSpring,
    SmoothingSpring,
    UpSmoothingSpring,
    SemiSmoothingSpring,
    DirectInerter,
    FlyweightInerter,
    VarspringOde,
    VarspringIntegral,
    Varinerter,
    VarspringDual,
    VariableCapacitor,
    VariableInductor,
    Varinductor,
    Varcapacitor,
}

/// Which port variable a law takes as its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    /// Driven by displacement (or its rate); produces the through-variable.
    Across,
    /// Driven by the through-variable; produces the rate.
    Through,
}

/// A port quantity that can be compared at cycle endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Position,
    Rate,
    Through,
    Parameter,
}

impl LawKind {
    pub const ALL: [LawKind; 14] = [
        LawKind::DirectSpring,
        LawKind::SmoothingSpring,
        LawKind::UpSmoothingSpring,
        LawKind::SemiSmoothingSpring,
        LawKind::DirectInerter,
        LawKind::FlyweightInerter,
        LawKind::VarspringOde,
        LawKind::VarspringIntegral,
        LawKind::Varinerter,
        LawKind::VarspringDual,
        LawKind::VariableCapacitor,
        LawKind::VariableInductor,
        LawKind::Varinductor,
        LawKind::Varcapacitor,
    ];

    /// The six adjustable spring and inerter laws shown to be active.
    pub const ACTIVE_MECHANICAL: [LawKind; 6] = [
        LawKind::DirectSpring,
        LawKind::SmoothingSpring,
        LawKind::UpSmoothingSpring,
        LawKind::SemiSmoothingSpring,
        LawKind::DirectInerter,
        LawKind::FlyweightInerter,
    ];

    pub const LOSSLESS: [LawKind; 6] = [
        LawKind::VarspringOde,
        LawKind::VarspringIntegral,
        LawKind::Varinerter,
        LawKind::VarspringDual,
        LawKind::Varinductor,
        LawKind::Varcapacitor,
    ];

    pub fn id(self) -> &'static str {
        match self {
            LawKind::DirectSpring => "direct-spring",
            LawKind::SmoothingSpring => "smoothing-spring",
            LawKind::UpSmoothingSpring => "up-smoothing-spring",
            LawKind::SemiSmoothingSpring => "semi-smoothing-spring",
            LawKind::DirectInerter => "direct-inerter",
            LawKind::FlyweightInerter => "flyweight-inerter",
            LawKind::VarspringOde => "varspring-ode",
            LawKind::VarspringIntegral => "varspring-integral",
            LawKind::Varinerter => "varinerter",
            LawKind::VarspringDual => "varspring-dual",
            LawKind::VariableCapacitor => "variable-capacitor",
            LawKind::VariableInductor => "variable-inductor",
            LawKind::Varinductor => "varinductor",
            LawKind::Varcapacitor => "varcapacitor",
        }
    }

    pub fn drive(self) -> DriveKind {
        match self {
            LawKind::VarspringDual | LawKind::VariableInductor | LawKind::Varinductor => {
                DriveKind::Through
            }
            _ => DriveKind::Across,
        }
    }

    pub fn is_lossless(self) -> bool {
        LawKind::LOSSLESS.contains(&self)
    }

    pub fn is_electrical(self) -> bool {
        matches!(
            self,
            LawKind::VariableCapacitor
                | LawKind::VariableInductor
                | LawKind::Varinductor
                | LawKind::Varcapacitor
        )
    }

    /// The across-side quantity that carries the law's state.
    ///
    /// Inerter-type laws only see `ẋ`, so their cycles are closed in rate;
    /// spring-type laws are closed in displacement; through-driven laws in `F`.
    pub fn state_quantity(self) -> Quantity {
        match self {
            LawKind::DirectInerter
            | LawKind::FlyweightInerter
            | LawKind::Varinerter
            | LawKind::VariableCapacitor
            | LawKind::Varcapacitor => Quantity::Rate,
            LawKind::VarspringDual | LawKind::VariableInductor | LawKind::Varinductor => {
                Quantity::Through
            }
            _ => Quantity::Position,
        }
    }

    /// Continuity class the driving signal needs for the law's derivatives to
    /// be free of impulses.
    pub fn required_continuity(self) -> i32 {
        match self.state_quantity() {
            Quantity::Rate => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for LawKind {
    type Err = DeviceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LawKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| DeviceError::UnknownLaw(s.to_string()))
    }
}

/// Input signal for a one-port run.
#[derive(Debug, Clone, PartialEq)]
pub enum Drive {
    /// Displacement `x(t)` (or angle, or flux linkage).
    Position(PiecewiseSignal),
    /// Rate `ẋ(t)` (velocity, angular velocity, or voltage); integrated
    /// exactly from zero at its start.
    Rate(PiecewiseSignal),
    /// Through-variable `F(t)` (force, torque, or current).
    Through(PiecewiseSignal),
}

impl Drive {
    pub fn name(&self) -> &'static str {
        match self {
            Drive::Position(_) => "position",
            Drive::Rate(_) => "rate",
            Drive::Through(_) => "through",
        }
    }

    pub fn signal(&self) -> &PiecewiseSignal {
        match self {
            Drive::Position(s) | Drive::Rate(s) | Drive::Through(s) => s,
        }
    }
}

/// Numerical settings for a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Accuracy {
    pub quadrature: QuadratureSpec,
    pub ode: OdeSpec,
}

/// A device law together with its parameter signal and initial internal
/// state (`w(t_s)` for the ODE form of the varspring; ignored otherwise).
#[derive(Debug, Clone, PartialEq)]
pub struct OnePortLaw {
    pub kind: LawKind,
    pub parameter: Parameter,
    pub initial_state: f64,
}

impl OnePortLaw {
    pub fn new(kind: LawKind, parameter: impl Into<Parameter>) -> Self {
        OnePortLaw {
            kind,
            parameter: parameter.into(),
            initial_state: 0.0,
        }
    }

    pub fn with_initial_state(mut self, w0: f64) -> Self {
        self.initial_state = w0;
        self
    }

    /// Runs the law over its full common domain with default accuracy.
    pub fn drive(&self, input: Drive) -> Result<Trajectory, DeviceError> {
        Trajectory::new(self.clone(), input, None, &Accuracy::default())
    }

    pub fn drive_over(
        &self,
        input: Drive,
        window: (f64, f64),
        accuracy: &Accuracy,
    ) -> Result<Trajectory, DeviceError> {
        Trajectory::new(self.clone(), input, Some(window), accuracy)
    }
}

/// Port variables at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortState {
    pub t: f64,
    pub position: Option<f64>,
    pub rate: f64,
    pub accel: Option<f64>,
    pub through: f64,
    pub through_rate: Option<f64>,
    pub parameter: Option<f64>,
    /// Stored energy for lossless laws.
    pub internal: Option<f64>,
}

impl PortState {
    pub fn power(&self) -> f64 {
        self.through * self.rate
    }
}

/// A one-port trajectory that can be sampled anywhere in its window.
pub trait PortBehaviour: Sync {
    fn label(&self) -> String;
    fn window(&self) -> (f64, f64);
    /// Points inside the window where the port variables may be non-smooth.
    fn breakpoints(&self) -> Vec<f64>;
    /// Breakpoints plus points where the numerical representation loses
    /// smoothness (dense-output nodes). Quadrature panels are cut here.
    fn quadrature_nodes(&self) -> Vec<f64> {
        self.breakpoints()
    }
    fn sample(&self, t: f64, side: Side) -> PortState;
    fn is_electrical(&self) -> bool {
        false
    }
}

/// Observable view of one quantity of a port trajectory.
pub struct PortView<'a> {
    pub port: &'a dyn PortBehaviour,
    pub quantity: Quantity,
}

impl Observable for PortView<'_> {
    fn label(&self) -> String {
        match self.quantity {
            Quantity::Position => "x",
            Quantity::Rate => "xdot",
            Quantity::Through => "F",
            Quantity::Parameter => "u",
        }
        .to_string()
    }

    fn derivative(&self, t: f64, order: u32, side: Side) -> Option<f64> {
        let s = self.port.sample(t, side);
        match (self.quantity, order) {
            (Quantity::Position, 0) => s.position,
            (Quantity::Position, 1) | (Quantity::Rate, 0) => Some(s.rate),
            (Quantity::Position, 2) | (Quantity::Rate, 1) => s.accel,
            (Quantity::Through, 0) => Some(s.through),
            (Quantity::Through, 1) => s.through_rate,
            (Quantity::Parameter, 0) => s.parameter,
            _ => None,
        }
    }
}

/// A port defined directly by a through signal and a displacement signal,
/// with no device law behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalPort {
    pub through: PiecewiseSignal,
    pub position: PiecewiseSignal,
    pub window: (f64, f64),
}

impl PortBehaviour for SignalPort {
    fn label(&self) -> String {
        "signal-pair".to_string()
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.through.breakpoints();
        b.extend(self.position.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn sample(&self, t: f64, side: Side) -> PortState {
        let x = self.position.jet_at(t, side);
        let f = self.through.jet_at(t, side);
        PortState {
            t,
            position: Some(x.value()),
            rate: x.d1(),
            accel: Some(x.d2()),
            through: f.value(),
            through_rate: Some(f.d1()),
            parameter: None,
            internal: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_ids_round_trip() {
        for k in LawKind::ALL {
            assert_eq!(k.id().parse::<LawKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.id()));
        }
        assert!(matches!(
            "springy".parse::<LawKind>(),
            Err(DeviceError::UnknownLaw(_))
        ));
    }
}
