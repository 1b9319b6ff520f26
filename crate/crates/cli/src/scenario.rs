//! Scenario files: strict JSON descriptions of a run.

use std::path::{Path, PathBuf};

use oneport_core::devices::{
    Accuracy, Drive, DriveKind, LawKind, OnePortLaw, TerminalElement, TerminatedTransformer, TwoPortKind,
    TwoPortLaw,
};
use oneport_core::energy::{InputRole, RepeatedCycle, TrajectoryFamily};
use oneport_core::signals::{PiecewiseSignal, Segment, SignalError};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One segment of a piecewise signal. Polynomial coefficients are in
/// absolute time unless `local` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentSpec {
    Poly {
        coeffs: Vec<f64>,
        from: f64,
        to: f64,
        #[serde(default)]
        local: bool,
    },
    Sin {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
        from: f64,
        to: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSpec {
    pub segments: Vec<SegmentSpec>,
    /// Hold the final segment's value past the end instead of stopping.
    #[serde(default)]
    pub hold: bool,
}

impl SignalSpec {
    pub fn build(&self) -> Result<PiecewiseSignal, SignalError> {
        let segments = self
            .segments
            .iter()
            .map(|s| match s {
                SegmentSpec::Poly { coeffs, from, to, local: false } => Segment::polynomial(coeffs, (*from, *to)),
                SegmentSpec::Poly { coeffs, from, to, local: true } => {
                    Segment::polynomial_local(coeffs, (*from, *to))
                }
                SegmentSpec::Sin {
                    offset,
                    amplitude,
                    omega,
                    phase,
                    from,
                    to,
                } => Segment::sinusoid(*offset, *amplitude, *omega, *phase, (*from, *to)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let signal = PiecewiseSignal::new(segments)?;
        Ok(if self.hold { signal.with_hold() } else { signal })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DeviceSpec {
    /// A one-port law with its parameter signal.
    Law {
        law: LawKind,
        parameter: SignalSpec,
        /// `w(t_start)` for varspring-ode.
        #[serde(default)]
        initial_state: f64,
    },
    /// A transformer with its second port terminated by a unit element.
    Transformer {
        kind: TwoPortKind,
        ratio: SignalSpec,
        element: TerminalElement,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    Position,
    Rate,
    Through,
}

/// Overrides of the numerical defaults; absent fields keep the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quad_rel_tol: Option<f64>,
    pub quad_abs_tol: Option<f64>,
    pub ode_step: Option<f64>,
    pub ode_tol: Option<f64>,
}

impl Tolerances {
    /// `tol` overrides both the quadrature relative tolerance and the ODE
    /// refinement tolerance.
    pub fn accuracy(&self, tol: Option<f64>) -> Result<Accuracy, CliError> {
        let mut acc = Accuracy::default();
        if let Some(v) = self.quad_rel_tol {
            acc.quadrature.rel_tol = v;
        }
        if let Some(v) = self.quad_abs_tol {
            acc.quadrature.abs_tol = v;
        }
        if let Some(v) = self.ode_step {
            acc.ode.step = v;
        }
        if let Some(v) = self.ode_tol {
            acc.ode.tol = v;
        }
        if let Some(v) = tol {
            acc.quadrature.rel_tol = v;
            acc.ode.tol = v;
        }
        let values = [acc.quadrature.rel_tol, acc.quadrature.abs_tol, acc.ode.step, acc.ode.tol];
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(CliError::Parse("tolerances and ODE step must be positive".into()));
        }
        Ok(acc)
    }
}

fn default_dt() -> f64 {
    1e-3
}

/// Input for `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub device: DeviceSpec,
    pub input: SignalSpec,
    /// Defaults to `through` for through-driven laws and spring/inductor
    /// terminations, `position` otherwise.
    #[serde(default)]
    pub input_kind: Option<InputKind>,
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Runnable form of a [`Scenario`].
pub enum Device {
    Law(OnePortLaw, Drive),
    Transformer(TerminatedTransformer),
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(CliError::Parse(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_start < self.t_end) {
            return Err(CliError::Parse(format!(
                "need t_start < t_end, got [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    pub fn device(&self) -> Result<Device, CliError> {
        let input = self.input.build().map_err(|e| CliError::Parse(format!("input: {e}")))?;
        match &self.device {
            DeviceSpec::Law {
                law,
                parameter,
                initial_state,
            } => {
                let param = parameter.build().map_err(|e| CliError::Parse(format!("parameter: {e}")))?;
                let kind = self.input_kind.unwrap_or(match law.drive() {
                    DriveKind::Across => InputKind::Position,
                    DriveKind::Through => InputKind::Through,
                });
                let drive = match kind {
                    InputKind::Position => Drive::Position(input),
                    InputKind::Rate => Drive::Rate(input),
                    InputKind::Through => Drive::Through(input),
                };
                Ok(Device::Law(
                    OnePortLaw::new(*law, param).with_initial_state(*initial_state),
                    drive,
                ))
            }
            DeviceSpec::Transformer { kind, ratio, element } => {
                let through = matches!(element, TerminalElement::UnitSpring | TerminalElement::UnitInductor);
                let expected = if through { InputKind::Through } else { InputKind::Position };
                if self.input_kind.is_some_and(|k| k != expected) {
                    return Err(CliError::Parse(format!("{element:?} termination takes a {expected:?} input")));
                }
                let ratio = ratio.build().map_err(|e| CliError::Parse(format!("ratio: {e}")))?;
                let input = input.restricted(self.t_start, self.t_end).map_err(CliError::simulation)?;
                let device = TerminatedTransformer::new(TwoPortLaw::new(*kind, ratio), *element, input)
                    .map_err(CliError::simulation)?;
                Ok(Device::Transformer(device))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Displacement,
    Rate,
}

/// A family of trajectories: a catalogue generator or a custom repeated
/// cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Generator(String),
    Repeat {
        parameter: SignalSpec,
        input: SignalSpec,
        role: Role,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Box<dyn TrajectoryFamily>, CliError> {
        match self {
            FamilySpec::Generator(id) => {
                oneport_core::catalog::family(id).map_err(|e| CliError::Parse(e.to_string()))
            }
            FamilySpec::Repeat { parameter, input, role } => {
                let parameter = parameter.build().map_err(|e| CliError::Parse(format!("parameter: {e}")))?;
                let input = input.build().map_err(|e| CliError::Parse(format!("input: {e}")))?;
                Ok(Box::new(RepeatedCycle {
                    id: "custom-cycle".into(),
                    parameter,
                    input,
                    role: match role {
                        Role::Displacement => InputRole::Displacement,
                        Role::Rate => InputRole::Rate,
                    },
                }))
            }
        }
    }
}

/// Input for `falsify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FalsifyScenario {
    pub law: LawKind,
    pub family: FamilySpec,
    #[serde(default)]
    pub initial_state: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Input for `drift-sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftScenario {
    pub v1: SignalSpec,
    pub coupling: SignalSpec,
    #[serde(default)]
    pub gamma0: f64,
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Reads and strictly parses a JSON scenario file.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
