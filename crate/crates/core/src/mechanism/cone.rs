use serde::{Deserialize, Serialize};

use super::MechanismError;
use crate::devices::Parameter;
use crate::signals::PiecewiseSignal;

/// Two cones of equal aperture in opposite orientation, coupled by a ball
/// at axial position `s ∈ [0, S]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeometry {
    /// Radius at the narrow end (m).
    pub r0: f64,
    /// Half-aperture angle (rad).
    pub alpha: f64,
    /// Axial length `S` (m).
    pub length: f64,
}

impl ConeGeometry {
    fn validate(&self) -> Result<(), MechanismError> {
        let ok = self.r0 > 0.0
            && self.alpha > 0.0
            && self.alpha < std::f64::consts::FRAC_PI_2
            && self.length > 0.0;
        if ok {
            Ok(())
        } else {
            Err(MechanismError::InvalidConfig(format!("invalid cone geometry {self:?}")))
        }
    }

    /// `p(s) = (R₀ + s·tanα) / (R₀ + (S − s)·tanα)`.
    pub fn ratio_at(&self, s: f64) -> f64 {
        let g = self.alpha.tan();
        (self.r0 + s * g) / (self.r0 + (self.length - s) * g)
    }
}

/// Transformer ratio produced by moving the ball along `s(t)`.
pub fn cone_ratio(geometry: &ConeGeometry, s: &PiecewiseSignal) -> Result<Parameter, MechanismError> {
    geometry.validate()?;
    let (t0, t1) = (s.start(), s.end());
    let (lo, t_lo) = Parameter::from(s.clone()).sampled_min(t0, t1);
    let (neg_hi, t_hi) = Parameter::from(s.scaled(-1.0)).sampled_min(t0, t1);
    let tol = 1e-12 * geometry.length;
    if lo < -tol {
        return Err(MechanismError::OutOfRange { t: t_lo, value: lo, limit: geometry.length });
    }
    if -neg_hi > geometry.length + tol {
        return Err(MechanismError::OutOfRange { t: t_hi, value: -neg_hi, limit: geometry.length });
    }
    let g = geometry.alpha.tan();
    let r0 = PiecewiseSignal::constant(geometry.r0, (t0, t1))?;
    let far = PiecewiseSignal::constant(geometry.r0 + geometry.length * g, (t0, t1))?;
    let num = PiecewiseSignal::linear_combination(1.0, &r0, g, s)?;
    let den = PiecewiseSignal::linear_combination(1.0, &far, -g, s)?;
    Ok(Parameter::ratio(num.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::{ideal_transformer, TwoPortKind, TwoPortLaw};
    use crate::signals::{Segment, Side};
    use std::f64::consts::PI;

    fn geom() -> ConeGeometry {
        ConeGeometry {
            r0: 0.01,
            alpha: PI / 8.0,
            length: 0.1,
        }
    }

    #[test]
    fn midpoint_end_and_reciprocity() {
        let g = geom();
        assert!((g.ratio_at(0.05) - 1.0).abs() < 1e-15);
        let want = 0.01 / (0.01 + 0.1 * (PI / 8.0).tan());
        assert!((g.ratio_at(0.0) - want).abs() < 1e-15);
        assert!((g.ratio_at(0.0) - 0.19446).abs() < 2e-5);
        for s in [0.0, 0.013, 0.07, 0.1] {
            assert!((g.ratio_at(s) * g.ratio_at(0.1 - s) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn signal_ratio_matches_pointwise_and_conserves_power() {
        let s = PiecewiseSignal::from_segment(Segment::sinusoid(0.05, 0.04, 3.0, 0.0, (0.0, 2.0)).unwrap());
        let p = cone_ratio(&geom(), &s).unwrap();
        for t in [0.0, 0.5, 1.7] {
            assert!((p.value(t) - geom().ratio_at(s.eval(t, 0).unwrap())).abs() < 1e-14);
        }
        let law = TwoPortLaw::new(TwoPortKind::MechanicalRotaryTransformer, p);
        let torque = PiecewiseSignal::from_segment(Segment::sinusoid(1.0, 2.0, 5.0, 0.1, (0.0, 2.0)).unwrap());
        let omega = PiecewiseSignal::from_segment(Segment::polynomial(&[0.3, -1.0, 0.4], (0.0, 2.0)).unwrap());
        let port = ideal_transformer(&law, torque, omega).unwrap();
        for k in 0..=40 {
            let t = k as f64 * 0.05;
            assert!(port.total_power(t, Side::Right).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_range_position() {
        let s = PiecewiseSignal::from_segment(Segment::polynomial(&[0.0, 0.2], (0.0, 1.0)).unwrap());
        assert!(matches!(cone_ratio(&geom(), &s), Err(MechanismError::OutOfRange { .. })));
    }
}
