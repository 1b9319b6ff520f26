use oneport_core::devices::{
    max_dual_residual, Accuracy, Drive, DriveKind, LawKind, OnePortLaw, Parameter, PortBehaviour, Trajectory,
};
use oneport_core::energy::balance_residual;
use oneport_core::numerics::QuadratureSpec;
use oneport_core::signals::{PiecewiseSignal, Segment, Side};
use proptest::prelude::*;

const WINDOW: (f64, f64) = (0.0, 1.0);

fn poly(c: &[f64]) -> PiecewiseSignal {
    PiecewiseSignal::from_segment(Segment::polynomial(c, WINDOW).unwrap())
}

fn cubic() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 4)
}

/// Positive parameter `1.5 + Σ cᵢtⁱ` with small coefficients.
fn positive() -> impl Strategy<Value = PiecewiseSignal> {
    prop::collection::vec(-0.3..0.3f64, 3).prop_map(|mut c| {
        c[0] += 1.5;
        poly(&c)
    })
}

fn drive(kind: LawKind, s: PiecewiseSignal) -> Drive {
    match (kind.drive(), kind) {
        (DriveKind::Through, _) => Drive::Through(s),
        (_, LawKind::VariableCapacitor | LawKind::Varcapacitor) => Drive::Rate(s),
        _ => Drive::Position(s),
    }
}

fn run(kind: LawKind, p: &PiecewiseSignal, s: PiecewiseSignal) -> Trajectory {
    OnePortLaw::new(kind, p.clone()).drive(drive(kind, s)).unwrap()
}

/// Cubic input starting from rest.
fn quiescent() -> impl Strategy<Value = Vec<f64>> {
    cubic().prop_map(|mut c| {
        c[0] = 0.0;
        c
    })
}

fn interior() -> impl Strategy<Value = f64> {
    0.05..0.95f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn laws_are_linear_in_their_input(p in positive(), a in cubic(), b in cubic(), alpha in -2.0..2.0f64, t in interior()) {
        let (sa, sb) = (poly(&a), poly(&b));
        let mix = PiecewiseSignal::linear_combination(alpha, &sa, 1.0, &sb).unwrap();
        for kind in LawKind::ALL {
            let f = |s: PiecewiseSignal| run(kind, &p, s).sample(t, Side::Right);
            let (fa, fb, fm) = (f(sa.clone()), f(sb.clone()), f(mix.clone()));
            let want_through = alpha * fa.through + fb.through;
            let want_rate = alpha * fa.rate + fb.rate;
            prop_assert!((fm.through - want_through).abs() < 1e-9 * (1.0 + want_through.abs()), "{kind}");
            prop_assert!((fm.rate - want_rate).abs() < 1e-9 * (1.0 + want_rate.abs()), "{kind}");
        }
    }

    #[test]
    fn reported_rates_match_finite_differences(p in positive(), a in cubic(), t in interior()) {
        let h = 1e-5;
        for kind in LawKind::ALL {
            let traj = run(kind, &p, poly(&a));
            let at = |t: f64| traj.sample(t, Side::Right);
            let (lo, mid, hi) = (at(t - h), at(t), at(t + h));
            if let (Some(x0), Some(x1)) = (lo.position, hi.position) {
                let fd = (x1 - x0) / (2.0 * h);
                prop_assert!((fd - mid.rate).abs() < 1e-6 * (1.0 + mid.rate.abs()), "{kind} xdot");
            }
            if let Some(df) = mid.through_rate {
                let fd = (hi.through - lo.through) / (2.0 * h);
                prop_assert!((fd - df).abs() < 1e-6 * (1.0 + df.abs()), "{kind} Fdot");
            }
            if let Some(acc) = mid.accel {
                let fd = (hi.rate - lo.rate) / (2.0 * h);
                prop_assert!((fd - acc).abs() < 1e-6 * (1.0 + acc.abs()), "{kind} xddot");
            }
        }
    }

    #[test]
    fn lossless_laws_balance_energy(p in positive(), a in cubic(), w0 in -0.5..0.5f64) {
        for kind in LawKind::LOSSLESS {
            let law = OnePortLaw::new(kind, p.clone()).with_initial_state(w0);
            let traj = law.drive(drive(kind, poly(&a))).unwrap();
            let audit = balance_residual(&traj, 50, &QuadratureSpec::default()).unwrap();
            prop_assert!(audit.max_residual < 1e-8, "{kind}: {audit:?}");
            prop_assert!(audit.passivity_margin > -1e-8, "{kind}: {audit:?}");
        }
    }

    #[test]
    fn varspring_forms_agree(p in positive(), a in quiescent(), t in interior()) {
        let ode = run(LawKind::VarspringOde, &p, poly(&a));
        let int = run(LawKind::VarspringIntegral, &p, poly(&a));
        let (so, si) = (ode.sample(t, Side::Right), int.sample(t, Side::Right));
        prop_assert!((so.through - si.through).abs() < 1e-9 * (1.0 + si.through.abs()));
        prop_assert!((so.internal.unwrap() - si.internal.unwrap()).abs() < 1e-9);
        let dual = Parameter::from(p.clone()).reciprocal();
        prop_assert!(max_dual_residual(&dual, &ode, 100) < 1e-7);
        prop_assert!(max_dual_residual(&dual, &int, 100) < 1e-7);
    }

    #[test]
    fn constant_parameter_reduces_to_time_invariant_element(k in 0.2..3.0f64, a in quiescent(), t in interior()) {
        let kp = poly(&[k]);
        let s = poly(&a);
        let (x, v, acc) = (s.eval(t, 0).unwrap(), s.eval(t, 1).unwrap(), s.eval(t, 2).unwrap());
        let close = |got: f64, want: f64| (got - want).abs() < 1e-9 * (1.0 + want.abs());
        for kind in [
            LawKind::DirectSpring,
            LawKind::SmoothingSpring,
            LawKind::UpSmoothingSpring,
            LawKind::SemiSmoothingSpring,
            LawKind::VarspringIntegral,
            LawKind::VarspringOde,
        ] {
            let param = if matches!(kind, LawKind::VarspringIntegral | LawKind::VarspringOde) { poly(&[k.sqrt()]) } else { kp.clone() };
            prop_assert!(close(run(kind, &param, s.clone()).sample(t, Side::Right).through, k * x), "{kind}");
        }
        for kind in [LawKind::DirectInerter, LawKind::FlyweightInerter, LawKind::Varinerter] {
            let param = if kind == LawKind::Varinerter { poly(&[k.sqrt()]) } else { kp.clone() };
            prop_assert!(close(run(kind, &param, s.clone()).sample(t, Side::Right).through, k * acc), "{kind}");
        }
        // rate-driven capacitors: i = C·v̇
        for kind in [LawKind::VariableCapacitor, LawKind::Varcapacitor] {
            let param = if kind == LawKind::Varcapacitor { poly(&[k.sqrt()]) } else { kp.clone() };
            prop_assert!(close(run(kind, &param, s.clone()).sample(t, Side::Right).through, k * v), "{kind}");
        }
        // through-driven: ẋ = k·Ḟ
        for kind in [LawKind::VarspringDual, LawKind::VariableInductor, LawKind::Varinductor] {
            let param = if kind == LawKind::VariableInductor { kp.clone() } else { poly(&[k.sqrt()]) };
            prop_assert!(close(run(kind, &param, s.clone()).sample(t, Side::Right).rate, k * v), "{kind}");
        }
    }
}

#[test]
fn parameter_expressions_are_positive_where_required() {
    let p = Parameter::from(poly(&[2.0, 1.0])).sqrt().reciprocal();
    assert!(OnePortLaw::new(LawKind::Varinerter, p).drive(Drive::Position(poly(&[0.0, 1.0]))).is_ok());
    let neg = poly(&[1.0, -2.0]);
    assert!(OnePortLaw::new(LawKind::DirectSpring, neg).drive(Drive::Position(poly(&[0.0, 1.0]))).is_err());
}

#[test]
fn accuracy_defaults_are_serialisable() {
    let acc = Accuracy::default();
    let json = serde_json::to_string(&acc).unwrap();
    let back: Accuracy = serde_json::from_str(&json).unwrap();
    assert_eq!(acc, back);
}
