use std::f64::consts::PI;
use std::fmt;

use crate::signals::{Jet, Observable, PiecewiseSignal, Side};

/// A device parameter: a piecewise signal or a simple expression of one.
///
/// Reciprocals, square roots and ratios arise when laws are re-expressed
/// (`p = r⁻¹`, `r = √k`, cone radius ratios); they are evaluated exactly
/// through [`Jet`] arithmetic up to the third derivative.
#[derive(Debug, Clone, PartialEq)]
pub enum Parameter {
    Signal(PiecewiseSignal),
    Scaled(f64, Box<Parameter>),
    Reciprocal(Box<Parameter>),
    Sqrt(Box<Parameter>),
    Ratio(Box<Parameter>, Box<Parameter>),
}

impl From<PiecewiseSignal> for Parameter {
    fn from(s: PiecewiseSignal) -> Self {
        Parameter::Signal(s)
    }
}

impl Parameter {
    pub fn reciprocal(self) -> Self {
        Parameter::Reciprocal(Box::new(self))
    }

    pub fn sqrt(self) -> Self {
        Parameter::Sqrt(Box::new(self))
    }

    pub fn scaled(self, k: f64) -> Self {
        match self {
            Parameter::Signal(s) => Parameter::Signal(s.scaled(k)),
            other => Parameter::Scaled(k, Box::new(other)),
        }
    }

    pub fn ratio(num: Parameter, den: Parameter) -> Self {
        Parameter::Ratio(Box::new(num), Box::new(den))
    }

    pub fn jet(&self, t: f64, side: Side) -> Jet {
        match self {
            Parameter::Signal(s) => s.jet_at(t, side),
            Parameter::Scaled(k, p) => p.jet(t, side).scale(*k),
            Parameter::Reciprocal(p) => p.jet(t, side).recip(),
            Parameter::Sqrt(p) => p.jet(t, side).sqrt(),
            Parameter::Ratio(n, d) => n.jet(t, side) * d.jet(t, side).recip(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t, Side::Right).value()
    }

    fn leaves(&self) -> Vec<&PiecewiseSignal> {
        match self {
            Parameter::Signal(s) => vec![s],
            Parameter::Scaled(_, p) | Parameter::Reciprocal(p) | Parameter::Sqrt(p) => p.leaves(),
            Parameter::Ratio(n, d) => {
                let mut v = n.leaves();
                v.extend(d.leaves());
                v
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.leaves().iter().flat_map(|s| s.breakpoints()).collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Latest start among the underlying signals.
    pub fn start(&self) -> f64 {
        self.leaves()
            .iter()
            .map(|s| s.start())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn domain_end(&self) -> f64 {
        self.leaves()
            .iter()
            .map(|s| s.domain_end())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_frequency(&self) -> f64 {
        self.leaves()
            .iter()
            .map(|s| s.max_frequency())
            .fold(0.0, f64::max)
    }

    /// Number of scan points per piece that resolves oscillations.
    pub(crate) fn scan_density(&self, len: f64) -> usize {
        let periods = len * self.max_frequency() / (2.0 * PI);
        64 + (32.0 * periods).ceil() as usize
    }

    /// Smallest sampled value over `[t0, t1]`, with its location. Both
    /// one-sided limits are inspected at every breakpoint.
    pub fn sampled_min(&self, t0: f64, t1: f64) -> (f64, f64) {
        let mut grid: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .filter(|b| *b > t0 && *b < t1)
            .collect();
        grid.insert(0, t0);
        grid.push(t1);
        let mut best = (f64::INFINITY, t0);
        let mut consider = |t: f64, side: Side| {
            let v = self.jet(t, side).value();
            if !(v >= best.0) {
                best = (v, t);
            }
        };
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let n = self.scan_density(b - a);
            consider(a, Side::Right);
            for i in 1..n {
                consider(a + (b - a) * i as f64 / n as f64, Side::Right);
            }
            consider(b, Side::Left);
        }
        best
    }
}

impl Observable for Parameter {
    fn label(&self) -> String {
        "u".to_string()
    }

    fn derivative(&self, t: f64, order: u32, side: Side) -> Option<f64> {
        self.jet(t, side).get(order)
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parameter::Signal(s) => write!(f, "{s}"),
            Parameter::Scaled(k, p) => write!(f, "{k}·({p})"),
            Parameter::Reciprocal(p) => write!(f, "1/({p})"),
            Parameter::Sqrt(p) => write!(f, "sqrt({p})"),
            Parameter::Ratio(n, d) => write!(f, "({n})/({d})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::Segment;

    fn ramp() -> PiecewiseSignal {
        PiecewiseSignal::from_segment(Segment::polynomial(&[1.0, 1.0], (0.0, 2.0)).unwrap())
    }

    #[test]
    fn reciprocal_derivatives() {
        let p = Parameter::from(ramp()).reciprocal();
        let j = p.jet(1.0, Side::Right);
        assert!((j.value() - 0.5).abs() < 1e-15);
        assert!((j.d1() + 0.25).abs() < 1e-15);
        assert!((j.d2() - 0.25).abs() < 1e-15);
        assert!((j.d3() + 6.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_and_scale() {
        let p = Parameter::from(ramp()).sqrt().scaled(3.0);
        let j = p.jet(3.0, Side::Left);
        assert!((j.value() - 6.0).abs() < 1e-14);
        assert!((j.d1() - 3.0 / 4.0).abs() < 1e-14);
    }

    #[test]
    fn sampled_min_finds_interior_minimum() {
        let s = PiecewiseSignal::from_segment(
            Segment::sinusoid(2.0, 1.0, 2.0 * PI, 0.0, (0.0, 3.0)).unwrap(),
        );
        let (m, at) = Parameter::from(s).sampled_min(0.0, 3.0);
        assert!((m - 1.0).abs() < 1e-6, "{m} at {at}");
    }
}
