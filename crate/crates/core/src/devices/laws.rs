//! One function per device law, each evaluating the law along its input
//! over the input's full domain with default accuracy.

use super::{DeviceError, Drive, LawKind, OnePortLaw, Parameter, PortBehaviour, Trajectory};
use crate::signals::{PiecewiseSignal, Side};

fn run(kind: LawKind, u: impl Into<Parameter>, drive: Drive) -> Result<Trajectory, DeviceError> {
    OnePortLaw::new(kind, u).drive(drive)
}

/// `F = k·x`.
pub fn direct_spring(k: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::DirectSpring, k, Drive::Position(x))
}

/// `F = k·x − ∫k̇·x`, so that `Ḟ = k·ẋ`.
pub fn smoothing_spring(k: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::SmoothingSpring, k, Drive::Position(x))
}

/// `F = k·x − ∫(k̇)₊·x`.
pub fn up_smoothing_spring(k: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::UpSmoothingSpring, k, Drive::Position(x))
}

/// `F = k·x − ½∫k̇·x`.
pub fn semi_smoothing_spring(k: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::SemiSmoothingSpring, k, Drive::Position(x))
}

/// `F = b·ẍ`.
pub fn direct_inerter(b: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::DirectInerter, b, Drive::Position(x))
}

/// `F = d/dt(b·ẋ)`.
pub fn flyweight_inerter(b: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::FlyweightInerter, b, Drive::Position(x))
}

/// `F = r²x + rw`, `ẇ = −ṙx`, `w(t_s) = w0`.
pub fn varspring_ode(r: impl Into<Parameter>, x: PiecewiseSignal, w0: f64) -> Result<Trajectory, DeviceError> {
    OnePortLaw::new(LawKind::VarspringOde, r)
        .with_initial_state(w0)
        .drive(Drive::Position(x))
}

/// `F = r·∫r·ẋ`.
pub fn varspring_integral(r: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::VarspringIntegral, r, Drive::Position(x))
}

/// `F = r·d/dt(r·ẋ)`.
pub fn varinerter(r: impl Into<Parameter>, x: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::Varinerter, r, Drive::Position(x))
}

/// `ẋ = p·d/dt(p·F)`, driven by `F`.
pub fn varspring_dual(p: impl Into<Parameter>, force: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::VarspringDual, p, Drive::Through(force))
}

/// `i = d/dt(C·v)`, driven by the voltage.
pub fn variable_capacitor(c: impl Into<Parameter>, v: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::VariableCapacitor, c, Drive::Rate(v))
}

/// `v = d/dt(L·i)`, driven by the current.
pub fn variable_inductor(l: impl Into<Parameter>, i: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::VariableInductor, l, Drive::Through(i))
}

/// `v = ℓ·d/dt(ℓ·i)`.
pub fn varinductor(l: impl Into<Parameter>, i: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::Varinductor, l, Drive::Through(i))
}

/// `i = c·d/dt(c·v)`.
pub fn varcapacitor(c: impl Into<Parameter>, v: PiecewiseSignal) -> Result<Trajectory, DeviceError> {
    run(LawKind::Varcapacitor, c, Drive::Rate(v))
}

/// `ẋ − p·d/dt(p·F)` at `t`, using the port's own `Ḟ`.
///
/// Ports produced by the varspring laws report `Ḟ` from the identity
/// `Ḟ = r²ẋ + (ṙ/r)F`, so no numerical differentiation is involved.
pub fn varspring_dual_residual(p: &Parameter, port: &dyn PortBehaviour, t: f64, side: Side) -> f64 {
    let s = port.sample(t, side);
    let fdot = s.through_rate.unwrap_or(f64::NAN);
    let pj = p.jet(t, side);
    s.rate - pj.value() * (pj.d1() * s.through + pj.value() * fdot)
}

/// Largest `|ẋ − p·d/dt(p·F)|` over `samples` equal steps of the port window,
/// with both one-sided limits taken at breakpoints.
pub fn max_dual_residual(p: &Parameter, port: &dyn PortBehaviour, samples: usize) -> f64 {
    let (t0, t1) = port.window();
    let n = samples.max(1);
    let mut worst: f64 = 0.0;
    let mut points: Vec<f64> = (0..=n).map(|k| t0 + (t1 - t0) * k as f64 / n as f64).collect();
    points.extend(port.breakpoints().into_iter().filter(|b| *b >= t0 && *b <= t1));
    for t in points {
        for side in [Side::Left, Side::Right] {
            if (t == t0 && side == Side::Left) || (t == t1 && side == Side::Right) {
                continue;
            }
            worst = worst.max(varspring_dual_residual(p, port, t, side).abs());
        }
    }
    worst
}
