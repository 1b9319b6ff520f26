use std::f64::consts::PI;

use super::{Accuracy, DeviceError, Drive, DriveKind, LawKind, OnePortLaw, PortBehaviour, PortState};
use crate::numerics::{integrate, sign_changes, solve_ode, OdeSolution, QuadratureSpec};
use crate::signals::{Jet, PiecewiseSignal, Side};

/// Cumulative integral of a law's memory term, stored at checkpoints and
/// completed on demand with one short quadrature.
#[derive(Debug, Clone, PartialEq)]
struct Memory {
    checkpoints: Vec<f64>,
    values: Vec<f64>,
}

/// A device law evaluated along a concrete input signal.
///
/// The conjugate port variable is available at any instant of the window,
/// with exact parameter/input derivatives and memory terms integrated from
/// the input's start (the quiescent past contributes nothing).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    law: OnePortLaw,
    input: PiecewiseSignal,
    origin: f64,
    window: (f64, f64),
    breakpoints: Vec<f64>,
    quadrature: QuadratureSpec,
    memory: Option<Memory>,
    ode: Option<OdeSolution>,
    smoothness_note: Option<String>,
}

impl Trajectory {
    pub fn new(
        law: OnePortLaw,
        drive: Drive,
        window: Option<(f64, f64)>,
        accuracy: &Accuracy,
    ) -> Result<Self, DeviceError> {
        let input = match (law.kind.drive(), drive) {
            (DriveKind::Across, Drive::Position(x)) => x,
            (DriveKind::Across, Drive::Rate(v)) => v.antiderivative(),
            (DriveKind::Through, Drive::Through(f)) => f,
            (_, other) => {
                return Err(DeviceError::DriveMismatch {
                    law: law.kind,
                    drive: other.name(),
                })
            }
        };
        let origin = input.start();
        let param_start = law.parameter.start();
        let domain_end = input.domain_end().min(law.parameter.domain_end());
        let default_end = if input.domain_end().is_finite() || !domain_end.is_finite() {
            input.end()
        } else {
            domain_end
        };
        let (t0, t1) = window.unwrap_or((origin, default_end));
        if !(t0 < t1) || t0 < origin || t1 > domain_end || param_start > origin {
            return Err(DeviceError::DomainMismatch {
                need_start: t0.min(origin),
                need_end: t1,
                have_start: param_start.max(origin),
                have_end: domain_end,
            });
        }

        let (min, at) = law.parameter.sampled_min(origin, t1);
        if !(min > 0.0) {
            return Err(DeviceError::NonPositiveParameter { t: at, value: min });
        }

        let mut breakpoints: Vec<f64> = input
            .breakpoints()
            .into_iter()
            .chain(law.parameter.breakpoints())
            .filter(|b| *b >= origin && *b <= t1)
            .collect();
        breakpoints.push(origin);
        breakpoints.push(t1);
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        if law.kind == LawKind::UpSmoothingSpring {
            let mut kinks = vec![];
            for w in breakpoints.windows(2) {
                let n = law.parameter.scan_density(w[1] - w[0]);
                kinks.extend(sign_changes(
                    |t| law.parameter.jet(t, Side::Right).d1(),
                    w[0],
                    w[1],
                    n,
                ));
            }
            breakpoints.extend(kinks);
            breakpoints.sort_by(f64::total_cmp);
            breakpoints.dedup();
        }

        let required = law.kind.required_continuity();
        let class = input.continuity_class();
        let smoothness_note = (class < required).then(|| {
            format!(
                "{} needs a C{required} input for impulse-free derivatives; input is C{class}",
                law.kind
            )
        });

        let mut run = Trajectory {
            law,
            input,
            origin,
            window: (t0, t1),
            breakpoints,
            quadrature: accuracy.quadrature,
            memory: None,
            ode: None,
            smoothness_note,
        };
        if run.has_memory() {
            run.memory = Some(run.build_memory()?);
        }
        if run.law.kind == LawKind::VarspringOde {
            let sol = solve_ode(
                |t, side, _, dy: &mut [f64]| {
                    dy[0] = -run.law.parameter.jet(t, side).d1() * run.input.at(t, 0, side);
                },
                &[run.law.initial_state],
                origin,
                t1,
                &run.breakpoints,
                &accuracy.ode,
            )?;
            run.ode = Some(sol);
        }
        Ok(run)
    }

    pub fn law(&self) -> &OnePortLaw {
        &self.law
    }

    /// Displacement for across-driven laws, through-variable otherwise.
    pub fn input(&self) -> &PiecewiseSignal {
        &self.input
    }

    /// Start of the input signal; memory terms integrate from here.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Set when the input is less smooth than the law's derivatives need.
    pub fn smoothness_note(&self) -> Option<&str> {
        self.smoothness_note.as_deref()
    }

    /// Internal state `w` of the ODE varspring form.
    pub fn internal_state(&self, t: f64) -> Option<f64> {
        self.ode.as_ref().map(|s| s.component(t, 0))
    }

    fn has_memory(&self) -> bool {
        matches!(
            self.law.kind,
            LawKind::SmoothingSpring
                | LawKind::UpSmoothingSpring
                | LawKind::SemiSmoothingSpring
                | LawKind::VarspringIntegral
                | LawKind::VarspringDual
                | LawKind::Varinductor
                | LawKind::VariableInductor
        )
    }

    /// Integrand of the law's memory term.
    fn memory_rate(&self, t: f64, side: Side) -> f64 {
        let u = self.law.parameter.jet(t, side);
        let s = self.input.jet_at(t, side);
        match self.law.kind {
            LawKind::SmoothingSpring => u.d1() * s.value(),
            LawKind::UpSmoothingSpring => u.d1().max(0.0) * s.value(),
            LawKind::SemiSmoothingSpring => 0.5 * u.d1() * s.value(),
            LawKind::VarspringIntegral => u.value() * s.d1(),
            // displacement of through-driven laws: ∫ẋ
            LawKind::VarspringDual | LawKind::Varinductor => {
                dual_rate(u, s)
            }
            LawKind::VariableInductor => u.d1() * s.value() + u.value() * s.d1(),
            _ => 0.0,
        }
    }

    fn build_memory(&self) -> Result<Memory, DeviceError> {
        let omega = self
            .law
            .parameter
            .max_frequency()
            .max(self.input.max_frequency());
        let spacing = if omega > 0.0 { (2.0 * PI / omega / 8.0).min(0.25) } else { 0.25 };
        let mut checkpoints = vec![self.origin];
        for w in self.breakpoints.windows(2) {
            let n = ((w[1] - w[0]) / spacing).ceil().max(1.0) as usize;
            for i in 1..n {
                checkpoints.push(w[0] + (w[1] - w[0]) * i as f64 / n as f64);
            }
            checkpoints.push(w[1]);
        }
        let mut values = Vec::with_capacity(checkpoints.len());
        values.push(0.0);
        let mut acc = 0.0;
        for w in checkpoints.windows(2) {
            acc += integrate(
                |t| self.memory_rate(t, Side::Right),
                w[0],
                w[1],
                &[],
                &self.quadrature,
            )?
            .value;
            values.push(acc);
        }
        Ok(Memory { checkpoints, values })
    }

    /// Memory integral from the origin to `t`.
    pub fn memory(&self, t: f64) -> f64 {
        let Some(m) = &self.memory else { return 0.0 };
        if t <= self.origin {
            return 0.0;
        }
        let n = m.checkpoints.len();
        let j = (m.checkpoints.partition_point(|c| *c <= t).max(1) - 1).min(n - 1);
        let a = m.checkpoints[j];
        if t == a {
            return m.values[j];
        }
        let tail = integrate(|s| self.memory_rate(s, Side::Right), a, t, &[], &self.quadrature)
            .unwrap_or_else(|e| crate::numerics::Quadrature {
                value: e.best_estimate().unwrap_or(f64::NAN),
                error: f64::NAN,
                panels: 0,
            });
        m.values[j] + tail.value
    }

    fn across_state(&self, t: f64, side: Side) -> PortState {
        let u = self.law.parameter.jet(t, side);
        let x = self.input.jet_at(t, side);
        let (u0, u1, u2) = (u.value(), u.d1(), u.d2());
        let (x0, x1, x2, x3) = (x.value(), x.d1(), x.d2(), x.d3());
        let mut internal = None;
        let (f, fdot) = match self.law.kind {
            LawKind::DirectSpring => (u0 * x0, u1 * x0 + u0 * x1),
            LawKind::SmoothingSpring => (u0 * x0 - self.memory(t), u0 * x1),
            LawKind::UpSmoothingSpring => (u0 * x0 - self.memory(t), u0 * x1 + u1.min(0.0) * x0),
            LawKind::SemiSmoothingSpring => (u0 * x0 - self.memory(t), u0 * x1 + 0.5 * u1 * x0),
            LawKind::DirectInerter => (u0 * x2, u1 * x2 + u0 * x3),
            LawKind::FlyweightInerter | LawKind::VariableCapacitor => {
                (u1 * x1 + u0 * x2, u2 * x1 + 2.0 * u1 * x2 + u0 * x3)
            }
            LawKind::VarspringOde => {
                let w = self.internal_state(t).unwrap_or(0.0);
                let f = u0 * u0 * x0 + u0 * w;
                internal = Some(0.5 * (u0 * x0 + w).powi(2));
                (f, u0 * u1 * x0 + u0 * u0 * x1 + u1 * w)
            }
            LawKind::VarspringIntegral => {
                let m = self.memory(t);
                internal = Some(0.5 * m * m);
                (u0 * m, u1 * m + u0 * u0 * x1)
            }
            LawKind::Varinerter | LawKind::Varcapacitor => {
                let g = u1 * x1 + u0 * x2;
                internal = Some(0.5 * (u0 * x1).powi(2));
                (u0 * g, u1 * g + u0 * (u2 * x1 + 2.0 * u1 * x2 + u0 * x3))
            }
            LawKind::VarspringDual | LawKind::VariableInductor | LawKind::Varinductor => {
                unreachable!("through-driven law on across path")
            }
        };
        PortState {
            t,
            position: Some(x0),
            rate: x1,
            accel: Some(x2),
            through: f,
            through_rate: Some(fdot),
            parameter: Some(u0),
            internal,
        }
    }

    fn through_state(&self, t: f64, side: Side) -> PortState {
        let u = self.law.parameter.jet(t, side);
        let f = self.input.jet_at(t, side);
        let (u0, u1, u2) = (u.value(), u.d1(), u.d2());
        let (f0, f1, f2) = (f.value(), f.d1(), f.d2());
        let (rate, accel, internal) = match self.law.kind {
            LawKind::VariableInductor => (
                u1 * f0 + u0 * f1,
                u2 * f0 + 2.0 * u1 * f1 + u0 * f2,
                None,
            ),
            _ => (
                dual_rate(u, f),
                (u1 * u1 + u0 * u2) * f0 + 3.0 * u0 * u1 * f1 + u0 * u0 * f2,
                Some(0.5 * (u0 * f0).powi(2)),
            ),
        };
        PortState {
            t,
            position: Some(self.memory(t)),
            rate,
            accel: Some(accel),
            through: f0,
            through_rate: Some(f1),
            parameter: Some(u0),
            internal,
        }
    }
}

/// `ẋ = p·d/dt(p·F)`.
fn dual_rate(p: Jet, f: Jet) -> f64 {
    p.value() * (p.d1() * f.value() + p.value() * f.d1())
}

impl PortBehaviour for Trajectory {
    fn label(&self) -> String {
        self.law.kind.to_string()
    }

    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn quadrature_nodes(&self) -> Vec<f64> {
        match &self.ode {
            Some(sol) => {
                let mut nodes: Vec<f64> = self.breakpoints.iter().chain(sol.times()).copied().collect();
                nodes.sort_by(f64::total_cmp);
                nodes.dedup();
                nodes
            }
            None => self.breakpoints.clone(),
        }
    }

    fn sample(&self, t: f64, side: Side) -> PortState {
        match self.law.kind.drive() {
            DriveKind::Across => self.across_state(t, side),
            DriveKind::Through => self.through_state(t, side),
        }
    }

    fn is_electrical(&self) -> bool {
        self.law.kind.is_electrical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{polynomial_pieces, Segment};

    fn poly(c: &[f64], iv: (f64, f64)) -> PiecewiseSignal {
        PiecewiseSignal::from_segment(Segment::polynomial(c, iv).unwrap())
    }

    fn at(run: &Trajectory, t: f64) -> PortState {
        run.sample(t, Side::Left)
    }

    #[test]
    fn varspring_ode_ramp_case() {
        let law = OnePortLaw::new(LawKind::VarspringOde, poly(&[1.0, 1.0], (0.0, 1.0)));
        let run = law.drive(Drive::Position(poly(&[0.0, 1.0], (0.0, 1.0)))).unwrap();
        let s = at(&run, 1.0);
        assert!((s.through - 3.0).abs() < 1e-9, "{}", s.through);
        assert!((s.internal.unwrap() - 1.125).abs() < 1e-9);
        assert!((run.internal_state(1.0).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn integral_form_matches_ode_form() {
        let r = poly(&[1.0, 1.0], (0.0, 1.0));
        let x = poly(&[0.0, 1.0], (0.0, 1.0));
        let a = OnePortLaw::new(LawKind::VarspringIntegral, r.clone())
            .drive(Drive::Position(x.clone()))
            .unwrap();
        let b = OnePortLaw::new(LawKind::VarspringOde, r).drive(Drive::Position(x)).unwrap();
        for t in [0.1, 0.5, 0.77, 1.0] {
            assert!((at(&a, t).through - at(&b, t).through).abs() < 1e-10);
        }
        assert!((at(&a, 1.0).through - 3.0).abs() < 1e-12);
    }

    #[test]
    fn varinerter_ramp_case() {
        let law = OnePortLaw::new(LawKind::Varinerter, poly(&[1.0, 1.0], (0.0, 1.0)));
        let run = law.drive(Drive::Position(poly(&[0.0, 0.0, 0.5], (0.0, 1.0)))).unwrap();
        let s = at(&run, 1.0);
        assert!((s.through - 6.0).abs() < 1e-12);
        assert!((s.internal.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn flyweight_and_capacitor_from_rates() {
        let b = poly(&[1.0, 1.0], (0.0, 1.0));
        let run = OnePortLaw::new(LawKind::FlyweightInerter, b)
            .drive(Drive::Rate(poly(&[0.0, 1.0], (0.0, 1.0))))
            .unwrap();
        assert!((at(&run, 1.0).through - 3.0).abs() < 1e-12);
        let cap = OnePortLaw::new(LawKind::VariableCapacitor, poly(&[1.0, 1.0], (0.0, 1.0)))
            .drive(Drive::Rate(PiecewiseSignal::constant(1.0, (0.0, 1.0)).unwrap()))
            .unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!((cap.sample(t, Side::Right).through - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn inductor_hand_derivative() {
        let run = OnePortLaw::new(LawKind::VariableInductor, poly(&[2.0, -1.0], (0.0, 1.0)))
            .drive(Drive::Through(poly(&[0.0, 1.0], (0.0, 1.0))))
            .unwrap();
        for t in [0.0, 0.25, 0.9] {
            let s = run.sample(t, Side::Right);
            assert!((s.rate - (2.0 - 2.0 * t)).abs() < 1e-12);
            assert!((s.position.unwrap() - (2.0 - t) * t).abs() < 1e-12);
        }
    }

    #[test]
    fn up_smoothing_example_three_force() {
        let k = PiecewiseSignal::from_segment(
            Segment::sinusoid(2.0, 1.0, 2.0 * PI, 0.0, (0.0, 3.0)).unwrap(),
        );
        let run = OnePortLaw::new(LawKind::UpSmoothingSpring, k)
            .drive(Drive::Position(PiecewiseSignal::constant(1.0, (0.0, 3.0)).unwrap()))
            .unwrap();
        assert!((at(&run, 3.0).through + 4.0).abs() < 1e-10);
        let bps = run.breakpoints();
        assert!(bps.iter().any(|b| (b - 0.25).abs() < 1e-12));
        assert!(bps.iter().any(|b| (b - 2.75).abs() < 1e-12));
    }

    #[test]
    fn smoothing_spring_constant_k_reduces() {
        let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        let run = OnePortLaw::new(
            LawKind::SmoothingSpring,
            PiecewiseSignal::constant(3.0, (0.0, 4.0)).unwrap(),
        )
        .drive(Drive::Position(x.clone()))
        .unwrap();
        for t in [0.5, 2.0, 3.5] {
            assert_eq!(run.sample(t, Side::Right).through, 3.0 * x.eval(t, 0).unwrap());
        }
    }

    #[test]
    fn rejects_bad_parameters_and_drives() {
        let x = poly(&[0.0, 1.0], (0.0, 1.0));
        let err = OnePortLaw::new(LawKind::DirectSpring, poly(&[0.5, -1.0], (0.0, 1.0)))
            .drive(Drive::Position(x.clone()))
            .unwrap_err();
        assert!(matches!(err, DeviceError::NonPositiveParameter { .. }));
        let err = OnePortLaw::new(LawKind::VarspringDual, poly(&[1.0], (0.0, 1.0)))
            .drive(Drive::Position(x.clone()))
            .unwrap_err();
        assert!(matches!(err, DeviceError::DriveMismatch { .. }));
        let err = OnePortLaw::new(LawKind::DirectSpring, poly(&[1.0], (0.0, 0.5)))
            .drive(Drive::Position(x))
            .unwrap_err();
        assert!(matches!(err, DeviceError::DomainMismatch { .. }));
    }

    #[test]
    fn smoothness_note_for_kinked_inerter_input() {
        let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 1.0)), (&[2.0, -1.0], (1.0, 2.0))]).unwrap();
        let run = OnePortLaw::new(
            LawKind::DirectInerter,
            PiecewiseSignal::constant(1.0, (0.0, 2.0)).unwrap(),
        )
        .drive(Drive::Position(x))
        .unwrap();
        assert!(run.smoothness_note().is_some());
    }
}
