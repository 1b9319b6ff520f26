//! Piecewise-analytic signals.
//!
//! A [`PiecewiseSignal`] is a chain of contiguous [`Segment`]s, each a sum of
//! polynomial and harmonic terms. The signal is identically zero before its
//! first breakpoint and right-continuous at every breakpoint. Derivatives of
//! any order are exact per segment.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest polynomial degree accepted by the public constructors.
pub const MAX_DEGREE: usize = 8;

/// Tolerance used by [`PiecewiseSignal::continuity_class`].
pub const CONTINUITY_TOL: f64 = 1e-12;

const JOIN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("empty coefficient list")]
    EmptyCoefficients,
    #[error("polynomial degree {0} exceeds the cap of {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("invalid interval [{0}, {1})")]
    InvalidInterval(f64, f64),
    #[error("non-finite segment data")]
    NonFinite,
    #[error("signal has no segments")]
    Empty,
    #[error("segments are not contiguous: one ends at {0}, the next starts at {1}")]
    NotContiguous(f64, f64),
    #[error("t = {t} lies beyond the final segment (end {end}) and the signal has no extension")]
    OutOfDomain { t: f64, end: f64 },
}

/// Which one-sided limit to take at a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Value and first three derivatives of a function at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn d1(&self) -> f64 {
        self.0[1]
    }

    pub fn d2(&self) -> f64 {
        self.0[2]
    }

    pub fn d3(&self) -> f64 {
        self.0[3]
    }

    pub fn get(&self, order: u32) -> Option<f64> {
        self.0.get(order as usize).copied()
    }

    pub fn scale(self, c: f64) -> Self {
        Jet(self.0.map(|v| c * v))
    }

    pub fn recip(self) -> Self {
        let [f, f1, f2, f3] = self.0;
        let q = 1.0 / f;
        let q1 = -f1 * q * q;
        let q2 = (2.0 * f1 * f1 - f * f2) * q * q * q;
        let q3 = -f3 * q * q + 6.0 * f1 * f2 * q * q * q - 6.0 * f1 * f1 * f1 * q * q * q * q;
        Jet([q, q1, q2, q3])
    }

    pub fn sqrt(self) -> Self {
        let [f, f1, f2, f3] = self.0;
        let q = f.sqrt();
        let q1 = f1 / (2.0 * q);
        let q2 = (f2 - 2.0 * q1 * q1) / (2.0 * q);
        let q3 = (f3 - 6.0 * q1 * q2) / (2.0 * q);
        Jet([q, q1, q2, q3])
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;

    fn add(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;

    /// Leibniz product rule up to third order.
    fn mul(self, o: Jet) -> Jet {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = o.0;
        Jet([
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
            a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
        ])
    }
}

/// Anything that can be evaluated with derivatives at a one-sided limit.
pub trait Observable: Sync {
    fn label(&self) -> String;
    /// `None` when the requested order is not available for this quantity.
    fn derivative(&self, t: f64, order: u32, side: Side) -> Option<f64>;
}

#[derive(Debug, Clone, PartialEq)]
enum Term {
    /// `Σ cᵢ (t − origin)ⁱ`
    Poly { coeffs: Vec<f64>, origin: f64 },
    /// `s·sin(ω(t − origin)) + c·cos(ω(t − origin))`, ω ≠ 0
    Harmonic {
        sin: f64,
        cos: f64,
        omega: f64,
        origin: f64,
    },
}

fn falling(i: usize, n: u32) -> f64 {
    (0..n as usize).fold(1.0, |acc, j| acc * (i - j) as f64)
}

impl Term {
    fn eval(&self, t: f64, order: u32) -> f64 {
        match self {
            Term::Poly { coeffs, origin } => {
                let n = order as usize;
                if n >= coeffs.len() {
                    return 0.0;
                }
                let u = t - origin;
                coeffs[n..]
                    .iter()
                    .enumerate()
                    .rev()
                    .fold(0.0, |acc, (j, c)| acc * u + c * falling(j + n, order))
            }
            Term::Harmonic {
                sin,
                cos,
                omega,
                origin,
            } => {
                let (mut s, mut c) = (*sin, *cos);
                for _ in 0..order {
                    (s, c) = (-omega * c, omega * s);
                }
                let theta = omega * (t - origin);
                s * theta.sin() + c * theta.cos()
            }
        }
    }

    fn scaled(&self, k: f64) -> Term {
        match self {
            Term::Poly { coeffs, origin } => Term::Poly {
                coeffs: coeffs.iter().map(|c| k * c).collect(),
                origin: *origin,
            },
            Term::Harmonic {
                sin,
                cos,
                omega,
                origin,
            } => Term::Harmonic {
                sin: k * sin,
                cos: k * cos,
                omega: *omega,
                origin: *origin,
            },
        }
    }

    fn shifted(&self, dt: f64) -> Term {
        let mut out = self.clone();
        match &mut out {
            Term::Poly { origin, .. } | Term::Harmonic { origin, .. } => *origin += dt,
        }
        out
    }

    /// An antiderivative (unnormalised; callers fix the constant).
    fn antiderivative(&self) -> Term {
        match self {
            Term::Poly { coeffs, origin } => {
                let mut out = Vec::with_capacity(coeffs.len() + 1);
                out.push(0.0);
                out.extend(coeffs.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
                Term::Poly {
                    coeffs: out,
                    origin: *origin,
                }
            }
            Term::Harmonic {
                sin,
                cos,
                omega,
                origin,
            } => Term::Harmonic {
                sin: cos / omega,
                cos: -sin / omega,
                omega: *omega,
                origin: *origin,
            },
        }
    }

    fn omega(&self) -> f64 {
        match self {
            Term::Poly { .. } => 0.0,
            Term::Harmonic { omega, .. } => omega.abs(),
        }
    }
}

/// One analytic piece of a signal on `[start, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    start: f64,
    end: f64,
    terms: Vec<Term>,
}

fn check_interval(interval: (f64, f64)) -> Result<(), SignalError> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(SignalError::InvalidInterval(a, b));
    }
    Ok(())
}

impl Segment {
    /// Polynomial `Σ cᵢ tⁱ` in absolute time on `interval`.
    pub fn polynomial(coeffs: &[f64], interval: (f64, f64)) -> Result<Self, SignalError> {
        Self::polynomial_about(coeffs, 0.0, interval)
    }

    /// Polynomial `Σ cᵢ (t − t_a)ⁱ` expanded about the segment start.
    pub fn polynomial_local(coeffs: &[f64], interval: (f64, f64)) -> Result<Self, SignalError> {
        Self::polynomial_about(coeffs, interval.0, interval)
    }

    fn polynomial_about(
        coeffs: &[f64],
        origin: f64,
        interval: (f64, f64),
    ) -> Result<Self, SignalError> {
        if coeffs.is_empty() {
            return Err(SignalError::EmptyCoefficients);
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(SignalError::DegreeTooHigh(coeffs.len() - 1));
        }
        check_interval(interval)?;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(SignalError::NonFinite);
        }
        Ok(Segment {
            start: interval.0,
            end: interval.1,
            terms: vec![Term::Poly {
                coeffs: coeffs.to_vec(),
                origin,
            }],
        })
    }

    /// `offset + amplitude·sin(omega·t + phase)` in absolute time.
    pub fn sinusoid(
        offset: f64,
        amplitude: f64,
        omega: f64,
        phase: f64,
        interval: (f64, f64),
    ) -> Result<Self, SignalError> {
        check_interval(interval)?;
        if ![offset, amplitude, omega, phase].iter().all(|v| v.is_finite()) {
            return Err(SignalError::NonFinite);
        }
        let mut terms = vec![];
        if omega == 0.0 {
            terms.push(Term::Poly {
                coeffs: vec![offset + amplitude * phase.sin()],
                origin: 0.0,
            });
        } else {
            terms.push(Term::Poly {
                coeffs: vec![offset],
                origin: 0.0,
            });
            terms.push(Term::Harmonic {
                sin: amplitude * phase.cos(),
                cos: amplitude * phase.sin(),
                omega,
                origin: 0.0,
            });
        }
        Ok(Segment {
            start: interval.0,
            end: interval.1,
            terms,
        })
    }

    pub fn zero(interval: (f64, f64)) -> Result<Self, SignalError> {
        check_interval(interval)?;
        Ok(Segment {
            start: interval.0,
            end: interval.1,
            terms: vec![],
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    /// Evaluates the segment's analytic expression (also outside its interval).
    pub fn eval(&self, t: f64, order: u32) -> f64 {
        self.terms.iter().map(|term| term.eval(t, order)).sum()
    }

    fn jet(&self, t: f64) -> Jet {
        Jet([
            self.eval(t, 0),
            self.eval(t, 1),
            self.eval(t, 2),
            self.eval(t, 3),
        ])
    }

    fn scaled(&self, k: f64) -> Segment {
        Segment {
            start: self.start,
            end: self.end,
            terms: self.terms.iter().map(|t| t.scaled(k)).collect(),
        }
    }

    fn shifted(&self, dt: f64) -> Segment {
        Segment {
            start: self.start + dt,
            end: self.end + dt,
            terms: self.terms.iter().map(|t| t.shifted(dt)).collect(),
        }
    }

    fn restricted(&self, start: f64, end: f64) -> Segment {
        Segment {
            start,
            end,
            terms: self.terms.clone(),
        }
    }

    fn max_omega(&self) -> f64 {
        self.terms.iter().map(Term::omega).fold(0.0, f64::max)
    }
}

/// A real signal built from contiguous analytic segments.
///
/// Before the first segment the signal and all its derivatives are zero.
/// After the last segment it is either undefined or, with
/// [`PiecewiseSignal::with_hold`], held at its final value.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSignal {
    segments: Vec<Segment>,
    hold: bool,
}

impl PiecewiseSignal {
    pub fn new(mut segments: Vec<Segment>) -> Result<Self, SignalError> {
        if segments.is_empty() {
            return Err(SignalError::Empty);
        }
        for i in 1..segments.len() {
            let prev_end = segments[i - 1].end;
            let next_start = segments[i].start;
            if (prev_end - next_start).abs() > JOIN_TOL * prev_end.abs().max(1.0) {
                return Err(SignalError::NotContiguous(prev_end, next_start));
            }
            segments[i].start = prev_end;
            if segments[i].start >= segments[i].end {
                return Err(SignalError::InvalidInterval(
                    segments[i].start,
                    segments[i].end,
                ));
            }
        }
        Ok(PiecewiseSignal {
            segments,
            hold: false,
        })
    }

    pub fn from_segment(segment: Segment) -> Self {
        PiecewiseSignal {
            segments: vec![segment],
            hold: false,
        }
    }

    pub fn constant(value: f64, interval: (f64, f64)) -> Result<Self, SignalError> {
        Segment::polynomial(&[value], interval).map(Self::from_segment)
    }

    /// Holds the final value (all derivatives zero) after the last segment.
    pub fn with_hold(mut self) -> Self {
        self.hold = true;
        self
    }

    pub fn holds(&self) -> bool {
        self.hold
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> f64 {
        self.segments[0].start
    }

    /// End of the last segment.
    pub fn end(&self) -> f64 {
        self.segments[self.segments.len() - 1].end
    }

    /// Last instant at which the signal is defined (infinite when held).
    pub fn domain_end(&self) -> f64 {
        if self.hold {
            f64::INFINITY
        } else {
            self.end()
        }
    }

    /// All segment boundaries including the start and end.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().map(|s| s.start).collect();
        out.push(self.end());
        out
    }

    /// Largest angular frequency among harmonic terms (0 for pure polynomials).
    pub fn max_frequency(&self) -> f64 {
        self.segments
            .iter()
            .map(Segment::max_omega)
            .fold(0.0, f64::max)
    }

    /// Right-continuous evaluation of the `order`-th derivative.
    pub fn eval(&self, t: f64, order: u32) -> Result<f64, SignalError> {
        self.eval_side(t, order, Side::Right)
    }

    pub fn eval_side(&self, t: f64, order: u32, side: Side) -> Result<f64, SignalError> {
        if t > self.end() && !self.hold {
            return Err(SignalError::OutOfDomain { t, end: self.end() });
        }
        Ok(self.at(t, order, side))
    }

    pub fn jet(&self, t: f64, side: Side) -> Result<Jet, SignalError> {
        if t > self.end() && !self.hold {
            return Err(SignalError::OutOfDomain { t, end: self.end() });
        }
        Ok(self.jet_at(t, side))
    }

    /// Segment governing `t` for the given side, `None` before the start.
    fn locate(&self, t: f64, side: Side) -> Option<&Segment> {
        let first = &self.segments[0];
        match side {
            Side::Right if t < first.start => None,
            Side::Left if t <= first.start => None,
            Side::Right => {
                let idx = self.segments.partition_point(|s| s.start <= t);
                Some(&self.segments[idx.saturating_sub(1)])
            }
            Side::Left => {
                let idx = self.segments.partition_point(|s| s.start < t);
                Some(&self.segments[idx.saturating_sub(1)])
            }
        }
    }

    /// Evaluation without the domain check. Past the end this extrapolates the
    /// last segment unless the signal is held.
    pub(crate) fn at(&self, t: f64, order: u32, side: Side) -> f64 {
        if self.hold && (t > self.end() || (t == self.end() && side == Side::Right)) {
            return if order == 0 {
                self.segments[self.segments.len() - 1].eval(self.end(), 0)
            } else {
                0.0
            };
        }
        self.locate(t, side).map_or(0.0, |seg| seg.eval(t, order))
    }

    pub(crate) fn jet_at(&self, t: f64, side: Side) -> Jet {
        if self.hold && (t > self.end() || (t == self.end() && side == Side::Right)) {
            return Jet::constant(self.at(t, 0, side));
        }
        self.locate(t, side).map_or(Jet::default(), |seg| seg.jet(t))
    }

    /// Largest `d ≤ 2` such that derivatives `0..=d` agree across every
    /// internal breakpoint; `-1` when the value itself jumps.
    pub fn continuity_class(&self) -> i32 {
        let mut class = 2;
        for pair in self.segments.windows(2) {
            let t = pair[1].start;
            for order in 0..=2u32 {
                if order as i32 > class {
                    break;
                }
                let left = pair[0].eval(t, order);
                let right = pair[1].eval(t, order);
                let scale = 1.0 + left.abs().max(right.abs());
                if (left - right).abs() > CONTINUITY_TOL * scale {
                    class = order as i32 - 1;
                    break;
                }
            }
        }
        class
    }

    pub fn scaled(&self, k: f64) -> Self {
        PiecewiseSignal {
            segments: self.segments.iter().map(|s| s.scaled(k)).collect(),
            hold: self.hold,
        }
    }

    /// The signal delayed by `dt`.
    pub fn shifted(&self, dt: f64) -> Self {
        PiecewiseSignal {
            segments: self.segments.iter().map(|s| s.shifted(dt)).collect(),
            hold: self.hold,
        }
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn then(&self, next: &PiecewiseSignal) -> Result<Self, SignalError> {
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        let mut out = PiecewiseSignal::new(segments)?;
        out.hold = next.hold;
        Ok(out)
    }

    /// `n` back-to-back copies, each shifted by the signal's length.
    pub fn repeated(&self, n: usize) -> Result<Self, SignalError> {
        let period = self.end() - self.start();
        let mut segments = Vec::with_capacity(self.segments.len() * n.max(1));
        for k in 0..n.max(1) {
            segments.extend(self.segments.iter().map(|s| s.shifted(k as f64 * period)));
        }
        let mut out = PiecewiseSignal::new(segments)?;
        out.hold = self.hold;
        Ok(out)
    }

    /// Exact antiderivative, zero at the start and continuous across breakpoints.
    pub fn antiderivative(&self) -> Self {
        let mut acc = 0.0;
        let mut segments = Vec::with_capacity(self.segments.len());
        for seg in &self.segments {
            let mut terms: Vec<Term> = seg.terms.iter().map(Term::antiderivative).collect();
            let raw: f64 = terms.iter().map(|t| t.eval(seg.start, 0)).sum();
            terms.push(Term::Poly {
                coeffs: vec![acc - raw],
                origin: 0.0,
            });
            let out = Segment {
                start: seg.start,
                end: seg.end,
                terms,
            };
            acc = out.eval(seg.end, 0);
            segments.push(out);
        }
        PiecewiseSignal {
            segments,
            hold: false,
        }
    }

    /// `a·f + b·g` on the union of both breakpoint grids, restricted to the
    /// common domain `[min start, min end]`.
    pub fn linear_combination(
        a: f64,
        f: &PiecewiseSignal,
        b: f64,
        g: &PiecewiseSignal,
    ) -> Result<Self, SignalError> {
        let start = f.start().min(g.start());
        let end = f.domain_end().min(g.domain_end());
        if !end.is_finite() {
            // both held: combine over the longer explicit range
            return Self::combine_until(a, f, b, g, start, f.end().max(g.end()))
                .map(Self::with_hold);
        }
        Self::combine_until(a, f, b, g, start, end)
    }

    fn combine_until(
        a: f64,
        f: &PiecewiseSignal,
        b: f64,
        g: &PiecewiseSignal,
        start: f64,
        end: f64,
    ) -> Result<Self, SignalError> {
        let mut grid: Vec<f64> = f
            .breakpoints()
            .into_iter()
            .chain(g.breakpoints())
            .filter(|t| *t > start && *t < end)
            .collect();
        grid.push(start);
        grid.push(end);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut segments = Vec::with_capacity(grid.len());
        for w in grid.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            let mut terms = vec![];
            for (k, sig) in [(a, f), (b, g)] {
                if let Some(part) = sig.piece_terms(mid) {
                    terms.extend(part.into_iter().map(|t| t.scaled(k)));
                }
            }
            segments.push(Segment {
                start: lo,
                end: hi,
                terms,
            });
        }
        PiecewiseSignal::new(segments)
    }

    /// Terms governing `t` (with a held tail represented as a constant).
    fn piece_terms(&self, t: f64) -> Option<Vec<Term>> {
        if t < self.start() {
            return None;
        }
        if t > self.end() {
            return self.hold.then(|| {
                vec![Term::Poly {
                    coeffs: vec![self.at(t, 0, Side::Right)],
                    origin: 0.0,
                }]
            });
        }
        self.locate(t, Side::Right).map(|s| s.terms.clone())
    }

    /// The signal restricted to `[start, end]` (clipping segments).
    pub fn restricted(&self, start: f64, end: f64) -> Result<Self, SignalError> {
        check_interval((start, end))?;
        let segments: Vec<Segment> = self
            .segments
            .iter()
            .filter(|s| s.end > start && s.start < end)
            .map(|s| s.restricted(s.start.max(start), s.end.min(end)))
            .collect();
        PiecewiseSignal::new(segments)
    }
}

impl Observable for PiecewiseSignal {
    fn label(&self) -> String {
        "signal".to_string()
    }

    fn derivative(&self, t: f64, order: u32, side: Side) -> Option<f64> {
        Some(self.at(t, order, side))
    }
}

impl fmt::Display for PiecewiseSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "signal[{} segment(s) on {}..{}{}]",
            self.segments.len(),
            self.start(),
            self.end(),
            if self.hold { ", held" } else { "" }
        )
    }
}

/// Builds a signal from consecutive `(coeffs, interval)` polynomial pieces in
/// absolute time.
pub fn polynomial_pieces(pieces: &[(&[f64], (f64, f64))]) -> Result<PiecewiseSignal, SignalError> {
    let segments = pieces
        .iter()
        .map(|(c, iv)| Segment::polynomial(c, *iv))
        .collect::<Result<Vec<_>, _>>()?;
    PiecewiseSignal::new(segments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn identity_segment() {
        let s = Segment::polynomial(&[0.0, 1.0], (0.0, 2.0)).unwrap();
        close(s.eval(1.25, 0), 1.25, 0.0);
        let sig = PiecewiseSignal::from_segment(s);
        close(sig.eval(1.5, 1).unwrap(), 1.0, 0.0);
        close(sig.eval(1.5, 2).unwrap(), 0.0, 0.0);
    }

    #[test]
    fn zero_polynomial() {
        let s = Segment::polynomial(&[0.0], (0.0, 1.0)).unwrap();
        for t in [0.0, 0.3, 0.99] {
            assert_eq!(s.eval(t, 0), 0.0);
        }
    }

    #[test]
    fn descending_ramp_in_absolute_time() {
        let s = Segment::polynomial(&[4.0, -1.0], (2.0, 4.0)).unwrap();
        close(s.eval(3.0, 0), 1.0, 1e-15);
        let local = Segment::polynomial_local(&[2.0, -1.0], (2.0, 4.0)).unwrap();
        close(local.eval(3.0, 0), 1.0, 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Segment::polynomial(&[], (0.0, 1.0)),
            Err(SignalError::EmptyCoefficients)
        );
        assert!(matches!(
            Segment::polynomial(&[1.0], (1.0, 1.0)),
            Err(SignalError::InvalidInterval(..))
        ));
        assert!(matches!(
            Segment::polynomial(&[1.0; 10], (0.0, 1.0)),
            Err(SignalError::DegreeTooHigh(9))
        ));
        assert!(Segment::polynomial(&[1.0; 9], (0.0, 1.0)).is_ok());
        assert!(matches!(
            Segment::sinusoid(0.0, 1.0, 1.0, 0.0, (2.0, 1.0)),
            Err(SignalError::InvalidInterval(..))
        ));
        let a = Segment::polynomial(&[1.0], (0.0, 1.0)).unwrap();
        let b = Segment::polynomial(&[1.0], (1.5, 2.0)).unwrap();
        assert!(matches!(
            PiecewiseSignal::new(vec![a, b]),
            Err(SignalError::NotContiguous(..))
        ));
    }

    #[test]
    fn sinusoid_values() {
        let k = Segment::sinusoid(2.0, 1.0, 2.0 * PI, 0.0, (0.0, 3.0)).unwrap();
        close(k.eval(0.25, 0), 3.0, 1e-15);
        let z = Segment::sinusoid(0.0, 0.0, 1.0, 0.0, (0.0, 1.0)).unwrap();
        for t in [0.0, 0.5, 0.9] {
            assert_eq!(z.eval(t, 0), 0.0);
        }
        let c = Segment::sinusoid(2.0, 1.0, 2.0 * PI, PI / 2.0, (0.0, 1.0)).unwrap();
        close(c.eval(0.0, 0), 3.0, 1e-15);
        close(c.eval(0.3, 0), 2.0 + (2.0 * PI * 0.3).cos(), 1e-14);
    }

    #[test]
    fn sinusoid_derivative_by_hand() {
        // d/dt (2 + sin 2πt) = 2π cos 2πt
        let k = PiecewiseSignal::from_segment(
            Segment::sinusoid(2.0, 1.0, 2.0 * PI, 0.0, (0.0, 3.0)).unwrap(),
        );
        close(k.eval(0.0, 1).unwrap(), 2.0 * PI, 1e-14);
        close(k.eval(0.25, 2).unwrap(), -4.0 * PI * PI, 1e-12);
        close(k.eval(0.0, 3).unwrap(), -8.0 * PI * PI * PI, 1e-10);
    }

    #[test]
    fn quiescent_before_start() {
        let s = PiecewiseSignal::from_segment(
            Segment::sinusoid(5.0, 1.0, 3.0, 0.2, (1.0, 2.0)).unwrap(),
        );
        for order in 0..4 {
            assert_eq!(s.eval(0.5, order).unwrap(), 0.0);
            assert_eq!(s.eval_side(1.0, order, Side::Left).unwrap(), 0.0);
        }
    }

    #[test]
    fn breakpoints_are_right_continuous() {
        let s = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        assert_eq!(s.eval(2.0, 1).unwrap(), -1.0);
        assert_eq!(s.eval_side(2.0, 1, Side::Left).unwrap(), 1.0);
        assert_eq!(s.eval(4.0, 0).unwrap(), 0.0);
        assert!(matches!(
            s.eval(4.5, 0),
            Err(SignalError::OutOfDomain { .. })
        ));
        let held = s.clone().with_hold();
        assert_eq!(held.eval(10.0, 0).unwrap(), 0.0);
        assert_eq!(held.eval(10.0, 1).unwrap(), 0.0);
    }

    #[test]
    fn continuity_classes() {
        let tri = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        assert_eq!(tri.continuity_class(), 0);
        let single = PiecewiseSignal::from_segment(
            Segment::polynomial(&[1.0, 2.0, 3.0], (0.0, 1.0)).unwrap(),
        );
        assert_eq!(single.continuity_class(), 2);
        let step = polynomial_pieces(&[(&[0.0], (0.0, 1.0)), (&[1.0], (1.0, 2.0))]).unwrap();
        assert_eq!(step.continuity_class(), -1);
        // t²/2 then t − 1/2: C¹ but not C²
        let c1 = polynomial_pieces(&[(&[0.0, 0.0, 0.5], (0.0, 1.0)), (&[-0.5, 1.0], (1.0, 2.0))])
            .unwrap();
        assert_eq!(c1.continuity_class(), 1);
    }

    #[test]
    fn antiderivative_is_exact() {
        let v = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        let x = v.antiderivative();
        close(x.eval(2.0, 0).unwrap(), 2.0, 1e-15);
        close(x.eval(4.0, 0).unwrap(), 4.0, 1e-14);
        close(x.eval(3.0, 1).unwrap(), 1.0, 1e-15);
        let s = PiecewiseSignal::from_segment(
            Segment::sinusoid(1.0, 2.0, 3.0, 0.4, (0.5, 2.0)).unwrap(),
        );
        let int = s.antiderivative();
        close(int.eval(0.5, 0).unwrap(), 0.0, 1e-15);
        for t in [0.7, 1.1, 1.9] {
            close(int.eval(t, 1).unwrap(), s.eval(t, 0).unwrap(), 1e-14);
        }
    }

    #[test]
    fn repetition_and_shift() {
        let x = polynomial_pieces(&[(&[0.0, 1.0], (0.0, 2.0)), (&[4.0, -1.0], (2.0, 4.0))]).unwrap();
        let r = x.repeated(3).unwrap();
        assert_eq!(r.end(), 12.0);
        for t in [0.5, 2.5, 3.7] {
            close(r.eval(t + 8.0, 0).unwrap(), x.eval(t, 0).unwrap(), 1e-13);
        }
        assert_eq!(r.breakpoints().len(), 7);
        let s = x.shifted(1.0);
        close(s.eval(1.5, 0).unwrap(), 0.5, 1e-15);
    }

    #[test]
    fn combination_on_distinct_grids() {
        let f = polynomial_pieces(&[(&[1.0, 1.0], (0.0, 1.0)), (&[2.0], (1.0, 3.0))]).unwrap();
        let g = PiecewiseSignal::from_segment(
            Segment::sinusoid(0.0, 1.0, 2.0, 0.0, (0.0, 2.0)).unwrap(),
        );
        let h = PiecewiseSignal::linear_combination(2.0, &f, -3.0, &g).unwrap();
        assert_eq!(h.end(), 2.0);
        for t in [0.1, 0.99, 1.0, 1.7] {
            for order in 0..3 {
                let want = 2.0 * f.eval(t, order).unwrap() - 3.0 * g.eval(t, order).unwrap();
                close(h.eval(t, order).unwrap(), want, 1e-13);
            }
        }
    }

    #[test]
    fn jet_rules() {
        let f = Jet([2.0, 0.5, -0.25, 0.125]);
        let q = f.recip() * f;
        close(q.value(), 1.0, 1e-15);
        for k in 1..4 {
            close(q.0[k], 0.0, 1e-14);
        }
        let s = f.sqrt();
        let back = s * s;
        for k in 0..4 {
            close(back.0[k], f.0[k], 1e-14);
        }
    }
}
