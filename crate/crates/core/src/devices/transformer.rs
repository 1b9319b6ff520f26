use serde::{Deserialize, Serialize};

use super::{DeviceError, DriveKind, LawKind, OnePortLaw, Parameter, PortBehaviour, PortState};
use crate::signals::{Jet, PiecewiseSignal, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoPortKind {
    /// Port variables are torque (effort slot) and angular velocity.
    MechanicalRotaryTransformer,
    /// Port variables are voltage (effort slot) and current.
    ElectricalTransformer,
}

/// Adjustable ideal transformer: efforts scale by the ratio, flows by
/// minus its reciprocal.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortLaw {
    pub kind: TwoPortKind,
    pub ratio: Parameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortPair {
    pub effort: f64,
    pub flow: f64,
}

impl PortPair {
    pub fn power(&self) -> f64 {
        self.effort * self.flow
    }
}

impl TwoPortLaw {
    pub fn new(kind: TwoPortKind, ratio: impl Into<Parameter>) -> Self {
        TwoPortLaw {
            kind,
            ratio: ratio.into(),
        }
    }

    /// Port-2 variables from port-1 variables at `t`.
    pub fn map(&self, t: f64, side: Side, port1: PortPair) -> PortPair {
        let m = self.ratio.jet(t, side).value();
        PortPair {
            effort: m * port1.effort,
            flow: -port1.flow / m,
        }
    }
}

/// Port-1 signals pushed through a transformer.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedPort {
    pub law: TwoPortLaw,
    pub effort: PiecewiseSignal,
    pub flow: PiecewiseSignal,
}

pub fn ideal_transformer(
    law: &TwoPortLaw,
    effort: PiecewiseSignal,
    flow: PiecewiseSignal,
) -> Result<TransformedPort, DeviceError> {
    let (lo, hi) = (
        effort.start().max(flow.start()),
        effort.domain_end().min(flow.domain_end()),
    );
    let end = hi.min(law.ratio.domain_end());
    let (min, at) = law.ratio.sampled_min(lo.max(law.ratio.start()), if end.is_finite() { end } else { effort.end() });
    if !(min > 0.0) {
        return Err(DeviceError::NonPositiveParameter { t: at, value: min });
    }
    Ok(TransformedPort {
        law: law.clone(),
        effort,
        flow,
    })
}

impl TransformedPort {
    pub fn port1(&self, t: f64, side: Side) -> PortPair {
        PortPair {
            effort: self.effort.at(t, 0, side),
            flow: self.flow.at(t, 0, side),
        }
    }

    pub fn port2(&self, t: f64, side: Side) -> PortPair {
        self.law.map(t, side, self.port1(t, side))
    }

    /// Sum of the power into both ports.
    pub fn total_power(&self, t: f64, side: Side) -> f64 {
        self.port1(t, side).power() + self.port2(t, side).power()
    }
}

/// Unit element connected across the second port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalElement {
    UnitCapacitor,
    UnitInductor,
    UnitSpring,
    UnitInerter,
}

/// The one-port law seen at port 1 when port 2 is terminated.
pub fn terminate_transformer(
    law: &TwoPortLaw,
    element: TerminalElement,
) -> Result<OnePortLaw, DeviceError> {
    let ratio = law.ratio.clone();
    match (law.kind, element) {
        (TwoPortKind::ElectricalTransformer, TerminalElement::UnitCapacitor) => {
            Ok(OnePortLaw::new(LawKind::Varcapacitor, ratio))
        }
        (TwoPortKind::ElectricalTransformer, TerminalElement::UnitInductor) => {
            Ok(OnePortLaw::new(LawKind::Varinductor, ratio.reciprocal()))
        }
        (TwoPortKind::MechanicalRotaryTransformer, TerminalElement::UnitSpring) => {
            Ok(OnePortLaw::new(LawKind::VarspringDual, ratio))
        }
        (TwoPortKind::MechanicalRotaryTransformer, TerminalElement::UnitInerter) => {
            Ok(OnePortLaw::new(LawKind::Varinerter, ratio.reciprocal()))
        }
        (kind, element) => Err(DeviceError::UnsupportedTermination { kind, element }),
    }
}

/// Port 1 of a transformer whose port 2 drives a unit element, evaluated
/// through the transformer relations and the element law rather than the
/// induced one-port law.
///
/// Capacitor and inerter terminations take the port-1 displacement (angle or
/// flux linkage) as input; spring and inductor terminations take the port-1
/// through-variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminatedTransformer {
    pub law: TwoPortLaw,
    pub element: TerminalElement,
    pub input: PiecewiseSignal,
    pub window: (f64, f64),
}

fn differentiate(j: Jet) -> Jet {
    Jet([j.0[1], j.0[2], j.0[3], 0.0])
}

impl TerminatedTransformer {
    pub fn new(
        law: TwoPortLaw,
        element: TerminalElement,
        input: PiecewiseSignal,
    ) -> Result<Self, DeviceError> {
        let induced = terminate_transformer(&law, element)?;
        let window = (input.start(), input.end());
        if law.ratio.start() > window.0 || law.ratio.domain_end() < window.1 {
            return Err(DeviceError::DomainMismatch {
                need_start: window.0,
                need_end: window.1,
                have_start: law.ratio.start(),
                have_end: law.ratio.domain_end(),
            });
        }
        let (min, at) = law.ratio.sampled_min(window.0, window.1);
        if !(min > 0.0) {
            return Err(DeviceError::NonPositiveParameter { t: at, value: min });
        }
        debug_assert_eq!(
            induced.kind.drive() == DriveKind::Through,
            matches!(element, TerminalElement::UnitSpring | TerminalElement::UnitInductor)
        );
        Ok(TerminatedTransformer {
            law,
            element,
            input,
            window,
        })
    }

    pub fn induced_law(&self) -> OnePortLaw {
        terminate_transformer(&self.law, self.element).expect("validated at construction")
    }
}

impl PortBehaviour for TerminatedTransformer {
    fn label(&self) -> String {
        format!("{:?}+{:?}", self.law.kind, self.element)
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.input.breakpoints();
        b.extend(self.law.ratio.breakpoints());
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    fn sample(&self, t: f64, side: Side) -> PortState {
        let m = self.law.ratio.jet(t, side);
        let inv = m.recip();
        let s = self.input.jet_at(t, side);
        match self.element {
            // effort-side input: rate on port 1, element sees the mapped rate
            TerminalElement::UnitCapacitor | TerminalElement::UnitInerter => {
                let rate1 = differentiate(s);
                // capacitor: v₂ = m·v₁ is the element's rate; inerter: element
                // speed is −ω₁ = ω/p
                let scale = if self.element == TerminalElement::UnitCapacitor { m } else { inv };
                let element_rate = scale * rate1;
                let element_through = differentiate(element_rate);
                // through at port 1 maps back by the same factor
                let through = scale * element_through;
                PortState {
                    t,
                    position: Some(s.value()),
                    rate: s.d1(),
                    accel: Some(s.d2()),
                    through: through.value(),
                    through_rate: Some(through.d1()),
                    parameter: Some(m.value()),
                    internal: Some(0.5 * element_rate.value().powi(2)),
                }
            }
            TerminalElement::UnitSpring | TerminalElement::UnitInductor => {
                // spring: T₁ = p·T is the element force; inductor: element
                // current −i₂ = i₁/m
                let scale = if self.element == TerminalElement::UnitSpring { m } else { inv };
                let element_through = scale * s;
                let element_rate = differentiate(element_through);
                let rate = scale * element_rate;
                PortState {
                    t,
                    position: None,
                    rate: rate.value(),
                    accel: Some(rate.d1()),
                    through: s.value(),
                    through_rate: Some(s.d1()),
                    parameter: Some(m.value()),
                    internal: Some(0.5 * element_through.value().powi(2)),
                }
            }
        }
    }

    fn is_electrical(&self) -> bool {
        self.law.kind == TwoPortKind::ElectricalTransformer
    }
}

/// Electrical law obtained by coupling a rotary varspring or varinerter to
/// an electrical port through a motor-generator with `v = kE·ω`, `T = kT·i`.
pub fn motor_generator_map(ke: f64, kt: f64, rotary: &OnePortLaw) -> Result<OnePortLaw, DeviceError> {
    let same = (ke - kt).abs() <= 1e-12 * ke.abs().max(kt.abs());
    if !(ke > 0.0 && kt > 0.0 && same) {
        return Err(DeviceError::ConstantMismatch { ke, kt });
    }
    match rotary.kind {
        LawKind::VarspringDual => Ok(OnePortLaw::new(
            LawKind::Varinductor,
            rotary.parameter.clone().scaled(ke),
        )),
        LawKind::Varinerter => Ok(OnePortLaw::new(
            LawKind::Varcapacitor,
            rotary.parameter.clone().scaled(1.0 / ke),
        )),
        other => Err(DeviceError::NotRotary(other)),
    }
}

/// `C(t) = (ε₀·b/d)·(κ·x(t) + a − x(t))` for a dielectric slab inserted a
/// depth `x` between plates of length `a`, width `b` and gap `d`.
pub fn parallel_plate_capacitance(
    eps0: f64,
    kappa: f64,
    a: f64,
    b: f64,
    d: f64,
    x: &PiecewiseSignal,
) -> Result<PiecewiseSignal, DeviceError> {
    if !(d > 0.0 && kappa >= 1.0 && a > 0.0 && b > 0.0 && eps0 > 0.0) {
        return Err(DeviceError::InvalidInput(format!(
            "capacitor geometry needs eps0, a, b, d > 0 and kappa >= 1 (eps0={eps0}, kappa={kappa}, a={a}, b={b}, d={d})"
        )));
    }
    let (lo, hi) = (x.start(), x.end());
    let depth = Parameter::from(x.clone());
    let (min, t_min) = depth.sampled_min(lo, hi);
    let (neg_max, t_max) = Parameter::from(x.scaled(-1.0)).sampled_min(lo, hi);
    let tol = 1e-12 * a;
    if min < -tol || -neg_max > a + tol {
        let t = if min < -tol { t_min } else { t_max };
        return Err(DeviceError::InvalidInput(format!(
            "insertion depth leaves [0, {a}] near t = {t}"
        )));
    }
    let scale = eps0 * b / d;
    let base = PiecewiseSignal::constant(scale * a, (lo, hi))?;
    Ok(PiecewiseSignal::linear_combination(1.0, &base, scale * (kappa - 1.0), x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::Drive;
    use crate::signals::Segment;

    fn lin(c: &[f64]) -> PiecewiseSignal {
        PiecewiseSignal::from_segment(Segment::polynomial(c, (0.0, 1.0)).unwrap())
    }

    fn wavy() -> PiecewiseSignal {
        PiecewiseSignal::from_segment(Segment::sinusoid(0.3, 1.0, 5.0, 0.2, (0.0, 1.0)).unwrap())
    }

    #[test]
    fn electrical_substitution() {
        let law = TwoPortLaw::new(TwoPortKind::ElectricalTransformer, lin(&[1.0, 1.0]));
        let port = ideal_transformer(&law, lin(&[1.0]), lin(&[0.0, 1.0])).unwrap();
        for t in [0.0, 0.4, 1.0] {
            let p2 = port.port2(t, Side::Right);
            assert!((p2.effort - (1.0 + t)).abs() < 1e-15);
            assert!((p2.flow + t / (1.0 + t)).abs() < 1e-15);
            assert!(port.total_power(t, Side::Right).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_ratio_flips_flow() {
        let law = TwoPortLaw::new(TwoPortKind::MechanicalRotaryTransformer, lin(&[1.0]));
        let p = law.map(0.5, Side::Right, PortPair { effort: 2.0, flow: 3.0 });
        assert_eq!(p, PortPair { effort: 2.0, flow: -3.0 });
    }

    #[test]
    fn terminations_match_induced_laws() {
        let ratio = PiecewiseSignal::from_segment(
            Segment::sinusoid(1.5, 0.4, 3.0, 0.0, (0.0, 1.0)).unwrap(),
        );
        let cases = [
            (TwoPortKind::ElectricalTransformer, TerminalElement::UnitCapacitor),
            (TwoPortKind::ElectricalTransformer, TerminalElement::UnitInductor),
            (TwoPortKind::MechanicalRotaryTransformer, TerminalElement::UnitSpring),
            (TwoPortKind::MechanicalRotaryTransformer, TerminalElement::UnitInerter),
        ];
        for (kind, element) in cases {
            let law = TwoPortLaw::new(kind, ratio.clone());
            let composite = TerminatedTransformer::new(law, element, wavy()).unwrap();
            let induced = composite.induced_law();
            let drive = match induced.kind.drive() {
                DriveKind::Across => Drive::Position(wavy()),
                DriveKind::Through => Drive::Through(wavy()),
            };
            let direct = induced.drive(drive).unwrap();
            for t in [0.0, 0.31, 0.77] {
                let a = composite.sample(t, Side::Right);
                let b = direct.sample(t, Side::Right);
                assert!((a.rate - b.rate).abs() < 1e-12, "{element:?}");
                assert!((a.through - b.through).abs() < 1e-12, "{element:?}");
                assert!((a.internal.unwrap() - b.internal.unwrap()).abs() < 1e-12);
            }
        }
        let err = terminate_transformer(
            &TwoPortLaw::new(TwoPortKind::ElectricalTransformer, lin(&[1.0])),
            TerminalElement::UnitSpring,
        );
        assert!(matches!(err, Err(DeviceError::UnsupportedTermination { .. })));
    }

    #[test]
    fn constant_ratio_capacitor() {
        let law = TwoPortLaw::new(TwoPortKind::ElectricalTransformer, lin(&[2.0]));
        let one = terminate_transformer(&law, TerminalElement::UnitCapacitor).unwrap();
        let v = lin(&[0.0, 0.0, 1.0]);
        let run = one.drive(Drive::Rate(v)).unwrap();
        // i = m²·v̇ = 4·2t
        assert!((run.sample(0.5, Side::Right).through - 4.0).abs() < 1e-14);
    }

    #[test]
    fn motor_generator() {
        let p = lin(&[1.0, 0.5]);
        let spring = OnePortLaw::new(LawKind::VarspringDual, p.clone());
        let ind = motor_generator_map(1.0, 1.0, &spring).unwrap();
        assert_eq!(ind.kind, LawKind::Varinductor);
        assert_eq!(ind.parameter.value(0.4), p.eval(0.4, 0).unwrap());

        // k = 2: rotary varinerter driven by ω = v/k gives T; i = T/k must
        // match the varcapacitor with c = r/k driven by v
        let r = lin(&[1.0, 1.0]);
        let rot = OnePortLaw::new(LawKind::Varinerter, r);
        let cap = motor_generator_map(2.0, 2.0, &rot).unwrap();
        let v = wavy();
        let elec = cap.drive(Drive::Rate(v.clone())).unwrap();
        let mech = rot.drive(Drive::Rate(v.scaled(0.5))).unwrap();
        for t in [0.1, 0.6, 0.95] {
            let i = mech.sample(t, Side::Right).through / 2.0;
            assert!((elec.sample(t, Side::Right).through - i).abs() < 1e-12);
        }
        assert!(matches!(
            motor_generator_map(1.0, 1.1, &rot),
            Err(DeviceError::ConstantMismatch { .. })
        ));
        assert!(matches!(
            motor_generator_map(1.0, 1.0, &OnePortLaw::new(LawKind::DirectSpring, lin(&[1.0]))),
            Err(DeviceError::NotRotary(_))
        ));
    }

    #[test]
    fn parallel_plate() {
        let eps0 = 8.854e-12;
        let c = parallel_plate_capacitance(
            eps0,
            3.0,
            0.1,
            0.1,
            1e-3,
            &PiecewiseSignal::constant(0.05, (0.0, 1.0)).unwrap(),
        )
        .unwrap();
        // 8.854e-10 F/m·(0.15 + 0.05) m
        assert!((c.eval(0.5, 0).unwrap() - 1.7708e-10).abs() < 1e-22);
        let empty = parallel_plate_capacitance(eps0, 3.0, 0.1, 0.1, 1e-3, &lin(&[0.0])).unwrap();
        assert!((empty.eval(0.2, 0).unwrap() - eps0 * 0.01 / 1e-3).abs() < 1e-24);
        let full = parallel_plate_capacitance(eps0, 3.0, 0.1, 0.1, 1e-3, &lin(&[0.1])).unwrap();
        assert!((full.eval(0.2, 0).unwrap() - 3.0 * eps0 * 0.01 / 1e-3).abs() < 1e-22);
        assert!(parallel_plate_capacitance(eps0, 3.0, 0.1, 0.1, 1e-3, &lin(&[0.0, 0.2])).is_err());
    }
}
