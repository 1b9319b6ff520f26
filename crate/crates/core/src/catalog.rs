//! Canonical trajectories of the worked examples and the families built
//! from them.

use std::f64::consts::PI;

use crate::devices::LawKind;
use crate::energy::{EnergyError, FamilyMember, IndexedFamily, InputRole, RepeatedCycle, TrajectoryFamily};
use crate::signals::{polynomial_pieces, PiecewiseSignal, Segment, SignalError};

/// Family generator ids accepted by [`family`].
pub const FAMILY_IDS: [&str; 6] = [
    "ex1-cycle",
    "ex2-cycle",
    "ex1-rate-cycle",
    "ex2-rate-cycle",
    "ex3",
    "ex4",
];

/// `(k, x)` of the first example on `[0, 4]`: `x` rises to 2 and returns
/// while `k` dips while stretched and recovers while relaxed.
pub fn ex1_signals() -> (PiecewiseSignal, PiecewiseSignal) {
    let k = polynomial_pieces(&[
        (&[2.0, -1.0], (0.0, 1.0)),
        (&[1.0], (1.0, 2.0)),
        (&[-1.0, 1.0], (2.0, 3.0)),
        (&[2.0], (3.0, 4.0)),
    ])
    .expect("static pieces");
    let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))])
        .expect("static pieces");
    (k, x)
}

/// `(k, x)` of the second example on `[0, 6]`.
pub fn ex2_signals() -> (PiecewiseSignal, PiecewiseSignal) {
    let k = polynomial_pieces(&[
        (&[2.0, -0.5], (0.0, 1.0)),
        (&[1.5], (1.0, 2.0)),
        (&[2.5, -0.5], (2.0, 3.0)),
        (&[1.0], (3.0, 4.0)),
        (&[-3.0, 1.0], (4.0, 5.0)),
        (&[2.0], (5.0, 6.0)),
    ])
    .expect("static pieces");
    let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 3.0)), (&[6.0, -1.0], (3.0, 6.0))])
        .expect("static pieces");
    (k, x)
}

/// Third example, index `n`: `k = 2 + sin 2πt`, `x = 1` on `[0, n]`, then
/// `k = 2`, `x = t + 1 − n` on `[n, 2n]`.
pub fn ex3_member(n: usize) -> Result<FamilyMember, SignalError> {
    let nf = n as f64;
    let k = PiecewiseSignal::new(vec![
        Segment::sinusoid(2.0, 1.0, 2.0 * PI, 0.0, (0.0, nf))?,
        Segment::polynomial(&[2.0], (nf, 2.0 * nf))?,
    ])?;
    let x = polynomial_pieces(&[(&[1.0], (0.0, nf)), (&[1.0 - nf, 1.0], (nf, 2.0 * nf))])?;
    Ok(FamilyMember {
        index: n,
        parameter: k.into(),
        input: x,
        role: InputRole::Displacement,
        window: (0.0, 2.0 * nf),
    })
}

/// Fourth example, index `n`: `k = 2 + cos 2πt`, `x = sin 2πt` on
/// `[0, n + ¾]`.
pub fn ex4_member(n: usize) -> Result<FamilyMember, SignalError> {
    let t1 = n as f64 + 0.75;
    let k = Segment::sinusoid(2.0, 1.0, 2.0 * PI, PI / 2.0, (0.0, t1))?;
    let x = Segment::sinusoid(0.0, 1.0, 2.0 * PI, 0.0, (0.0, t1))?;
    Ok(FamilyMember {
        index: n,
        parameter: PiecewiseSignal::from_segment(k).into(),
        input: PiecewiseSignal::from_segment(x),
        role: InputRole::Displacement,
        window: (0.0, t1),
    })
}

/// Closed form `E_n = 2n − n²` of the third example.
pub fn ex3_energy(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n - n * n
}

/// Closed form `F(n) = 2 − 2n` of the third example.
pub fn ex3_force(n: usize) -> f64 {
    2.0 - 2.0 * n as f64
}

/// Closed form `E = 1 − (4n+3)π/8` of the fourth example.
pub fn ex4_energy(n: usize) -> f64 {
    1.0 - (4.0 * n as f64 + 3.0) * PI / 8.0
}

/// Closed form `F(t₁) = (4n+3)π/8 − 2` of the fourth example.
pub fn ex4_force(n: usize) -> f64 {
    (4.0 * n as f64 + 3.0) * PI / 8.0 - 2.0
}

pub fn family(id: &str) -> Result<Box<dyn TrajectoryFamily>, EnergyError> {
    let repeat = |(k, x): (PiecewiseSignal, PiecewiseSignal), role| -> Box<dyn TrajectoryFamily> {
        Box::new(RepeatedCycle {
            id: id.to_string(),
            parameter: k,
            input: x,
            role,
        })
    };
    Ok(match id {
        "ex1-cycle" => repeat(ex1_signals(), InputRole::Displacement),
        "ex2-cycle" => repeat(ex2_signals(), InputRole::Displacement),
        "ex1-rate-cycle" => repeat(ex1_signals(), InputRole::Rate),
        "ex2-rate-cycle" => repeat(ex2_signals(), InputRole::Rate),
        "ex3" => Box::new(IndexedFamily::new("ex3", ex3_member)),
        "ex4" => Box::new(IndexedFamily::new("ex4", ex4_member)),
        other => return Err(EnergyError::InvalidFamily(format!("unknown family generator '{other}'"))),
    })
}

/// The family on which an active law is shown to be active, with the
/// family length used for the trend test.
pub fn canonical_family(kind: LawKind) -> Option<(&'static str, usize)> {
    match kind {
        LawKind::DirectSpring => Some(("ex1-cycle", 8)),
        LawKind::SmoothingSpring => Some(("ex2-cycle", 8)),
        LawKind::UpSmoothingSpring => Some(("ex3", 12)),
        LawKind::SemiSmoothingSpring => Some(("ex4", 8)),
        LawKind::DirectInerter => Some(("ex1-rate-cycle", 8)),
        LawKind::FlyweightInerter => Some(("ex2-rate-cycle", 8)),
        LawKind::VariableCapacitor => Some(("ex2-rate-cycle", 8)),
        LawKind::VariableInductor => Some(("ex2-cycle", 8)),
        _ => None,
    }
}

/// Family shapes used as negative controls for a lossless law: the same
/// generators that expose the active law with the matching port role.
pub fn control_families(kind: LawKind) -> &'static [&'static str] {
    match kind {
        LawKind::Varinerter | LawKind::Varcapacitor => &["ex1-rate-cycle", "ex2-rate-cycle"],
        LawKind::VarspringDual | LawKind::Varinductor => &["ex1-cycle", "ex2-cycle"],
        LawKind::VarspringOde | LawKind::VarspringIntegral => &["ex1-cycle", "ex2-cycle", "ex3", "ex4"],
        _ => &[],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_signals_close_their_cycles() {
        for (k, x) in [ex1_signals(), ex2_signals()] {
            assert_eq!(k.eval(k.start(), 0).unwrap(), k.eval_side(k.end(), 0, crate::signals::Side::Left).unwrap());
            assert_eq!(x.eval(0.0, 0).unwrap(), 0.0);
            assert_eq!(x.continuity_class(), 0);
            assert_eq!(k.continuity_class(), 0);
        }
    }

    #[test]
    fn families_resolve() {
        for id in FAMILY_IDS {
            let f = family(id).unwrap();
            let m = f.member(3).unwrap();
            assert!(m.window.1 > m.window.0);
        }
        assert!(family("nope").is_err());
        let m = ex3_member(3).unwrap();
        assert_eq!(m.window, (0.0, 6.0));
        assert_eq!(m.input.eval(4.0, 0).unwrap(), 2.0);
    }
}
