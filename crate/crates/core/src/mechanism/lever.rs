use serde::{Deserialize, Serialize};

use super::MechanismError;
use crate::devices::{LawKind, OnePortLaw, Parameter, PortBehaviour};
use crate::numerics::{solve_ode, OdeSolution, OdeSpec};
use crate::signals::{PiecewiseSignal, Side};

/// Lever with an internal spring of constant `k0` at height `y0` and a
/// fulcrum starting at horizontal position `xr0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeverConfig {
    pub y0: f64,
    pub xr0: f64,
    pub k0: f64,
}

impl LeverConfig {
    fn validate(&self) -> Result<(), MechanismError> {
        if !(self.y0 > 0.0 && self.k0 > 0.0 && self.xr0.is_finite()) {
            return Err(MechanismError::InvalidConfig(format!(
                "lever needs y0 > 0 and k0 > 0 (y0 = {}, k0 = {})",
                self.y0, self.k0
            )));
        }
        Ok(())
    }

    /// The varspring realised by this lever: `R = √k0·r` and
    /// `w(t_s) = √k0·(r(t_s)+1)·xr0`.
    pub fn equivalent_varspring(&self, r: &Parameter, t_s: f64) -> OnePortLaw {
        let s = self.k0.sqrt();
        let w0 = s * (r.value(t_s) + 1.0) * self.xr0;
        OnePortLaw::new(LawKind::VarspringOde, r.clone().scaled(s)).with_initial_state(w0)
    }
}

/// Fulcrum position, height and their rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PivotState {
    pub xr: f64,
    pub xr_dot: f64,
    pub yr: f64,
    pub yr_dot: f64,
}

/// A path followed by the fulcrum.
pub trait PivotPath: Sync {
    fn window(&self) -> (f64, f64);
    fn breakpoints(&self) -> Vec<f64>;
    fn pivot(&self, t: f64, side: Side) -> PivotState;
}

/// Fulcrum motion that keeps the lever doing no work at the fulcrum.
#[derive(Debug, Clone, PartialEq)]
pub struct FulcrumRun {
    r: Parameter,
    x: PiecewiseSignal,
    config: LeverConfig,
    sol: OdeSolution,
    window: (f64, f64),
    breakpoints: Vec<f64>,
}

/// Integrates `ẋ_r = −ṙ(x + x_r)/(r+1)` from `xr0`; `y_r = y0/(r+1)` is
/// algebraic.
pub fn fulcrum_trajectory(
    r: impl Into<Parameter>,
    x: PiecewiseSignal,
    config: LeverConfig,
    spec: &OdeSpec,
) -> Result<FulcrumRun, MechanismError> {
    config.validate()?;
    let r = r.into();
    let window = (x.start(), x.end());
    if r.start() > window.0 || r.domain_end() < window.1 {
        return Err(MechanismError::InvalidConfig(format!(
            "ratio signal does not cover [{}, {}]",
            window.0, window.1
        )));
    }
    let (min, at) = r.sampled_min(window.0, window.1);
    if !(min > 0.0) {
        return Err(crate::devices::DeviceError::NonPositiveParameter { t: at, value: min }.into());
    }
    let mut breakpoints = x.breakpoints();
    breakpoints.extend(r.breakpoints());
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();
    let sol = solve_ode(
        |t, side, y, dy: &mut [f64]| {
            let rj = r.jet(t, side);
            dy[0] = -rj.d1() * (x.at(t, 0, side) + y[0]) / (rj.value() + 1.0);
        },
        &[config.xr0],
        window.0,
        window.1,
        &breakpoints,
        spec,
    )?;
    Ok(FulcrumRun {
        r,
        x,
        config,
        sol,
        window,
        breakpoints,
    })
}

impl FulcrumRun {
    pub fn config(&self) -> &LeverConfig {
        &self.config
    }

    pub fn ratio(&self) -> &Parameter {
        &self.r
    }

    pub fn input(&self) -> &PiecewiseSignal {
        &self.x
    }

    /// `x₀ = r·x + (r+1)·x_r`, the internal spring's deflection.
    pub fn internal_deflection(&self, t: f64, side: Side) -> f64 {
        let r = self.r.jet(t, side).value();
        r * self.x.at(t, 0, side) + (r + 1.0) * self.sol.component(t, 0)
    }

    /// Fulcrum position on `samples + 1` equally spaced instants.
    pub fn sample_xr(&self, samples: usize) -> Vec<f64> {
        let (t0, t1) = self.window;
        let n = samples.max(1);
        (0..=n)
            .map(|k| self.sol.component(t0 + (t1 - t0) * k as f64 / n as f64, 0))
            .collect()
    }
}

impl PivotPath for FulcrumRun {
    fn window(&self) -> (f64, f64) {
        self.window
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }

    fn pivot(&self, t: f64, side: Side) -> PivotState {
        let r = self.r.jet(t, side);
        let denom = r.value() + 1.0;
        PivotState {
            xr: self.sol.component(t, 0),
            xr_dot: self.sol.component_rate(t, 0),
            yr: self.config.y0 / denom,
            yr_dot: -self.config.y0 * r.d1() / (denom * denom),
        }
    }
}

/// A fulcrum moved along prescribed coordinate signals.
#[derive(Debug, Clone, PartialEq)]
pub struct PrescribedPivot {
    pub xr: PiecewiseSignal,
    pub yr: PiecewiseSignal,
}

impl PivotPath for PrescribedPivot {
    fn window(&self) -> (f64, f64) {
        (self.xr.start().max(self.yr.start()), self.xr.end().min(self.yr.end()))
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.xr.breakpoints();
        b.extend(self.yr.breakpoints());
        b
    }

    fn pivot(&self, t: f64, side: Side) -> PivotState {
        let xr = self.xr.jet_at(t, side);
        let yr = self.yr.jet_at(t, side);
        PivotState {
            xr: xr.value(),
            xr_dot: xr.d1(),
            yr: yr.value(),
            yr_dot: yr.d1(),
        }
    }
}

/// `y_r·ẋ_r − ẏ_r·(x_r + x)`: zero when the fulcrum moves parallel to the bar.
pub fn parallel_residual(pivot: &dyn PivotPath, x: &PiecewiseSignal, t: f64, side: Side) -> f64 {
    let p = pivot.pivot(t, side);
    p.yr * p.xr_dot - p.yr_dot * (p.xr + x.at(t, 0, side))
}

fn sample_points(window: (f64, f64), breakpoints: &[f64], samples: usize) -> Vec<(f64, Side)> {
    let (t0, t1) = window;
    let n = samples.max(1);
    let mut pts: Vec<(f64, Side)> = (0..=n)
        .map(|k| (t0 + (t1 - t0) * k as f64 / n as f64, if k == n { Side::Left } else { Side::Right }))
        .collect();
    for &b in breakpoints.iter().filter(|b| **b > t0 && **b < t1) {
        pts.push((b, Side::Left));
        pts.push((b, Side::Right));
    }
    pts
}

pub fn max_parallel_residual(pivot: &dyn PivotPath, x: &PiecewiseSignal, samples: usize) -> f64 {
    sample_points(pivot.window(), &pivot.breakpoints(), samples)
        .into_iter()
        .map(|(t, side)| parallel_residual(pivot, x, t, side).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentResidual {
    /// `F·y_r − k0·x₀·(y0 − y_r)`.
    pub moment: f64,
    /// `ẋ₀ − r·ẋ`.
    pub kinematic: f64,
    /// `F·ẋ − d/dt(½·k0·x₀²)`.
    pub power: f64,
}

/// Residuals of the moment balance about the fulcrum for a force trajectory
/// `port` (typically the equivalent varspring run) and a fulcrum run.
pub fn moment_balance_residual(port: &dyn PortBehaviour, lever: &FulcrumRun, t: f64, side: Side) -> MomentResidual {
    let s = port.sample(t, side);
    let p = lever.pivot(t, side);
    let r = lever.r.jet(t, side);
    let cfg = lever.config;
    let x = lever.x.jet_at(t, side);
    let x0 = r.value() * x.value() + (r.value() + 1.0) * p.xr;
    let x0_dot = r.d1() * x.value() + r.value() * x.d1() + r.d1() * p.xr + (r.value() + 1.0) * p.xr_dot;
    MomentResidual {
        moment: s.through * p.yr - cfg.k0 * x0 * (cfg.y0 - p.yr),
        kinematic: x0_dot - r.value() * x.d1(),
        power: s.through * x.d1() - cfg.k0 * x0 * x0_dot,
    }
}

/// Component-wise maxima of |[`moment_balance_residual`]| over the lever window.
pub fn max_moment_residuals(port: &dyn PortBehaviour, lever: &FulcrumRun, samples: usize) -> MomentResidual {
    sample_points(lever.window, &lever.breakpoints, samples)
        .into_iter()
        .map(|(t, side)| moment_balance_residual(port, lever, t, side))
        .fold(
            MomentResidual {
                moment: 0.0,
                kinematic: 0.0,
                power: 0.0,
            },
            |acc, m| MomentResidual {
                moment: acc.moment.max(m.moment.abs()),
                kinematic: acc.kinematic.max(m.kinematic.abs()),
                power: acc.power.max(m.power.abs()),
            },
        )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelReport {
    pub min: f64,
    pub max: f64,
    pub range: f64,
}

/// Extent of the fulcrum's excursion.
pub fn fulcrum_travel_report(xr: &[f64]) -> TravelReport {
    let min = xr.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xr.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    TravelReport {
        min,
        max,
        range: max - min,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::Segment;

    fn lin(c: &[f64]) -> PiecewiseSignal {
        PiecewiseSignal::from_segment(Segment::polynomial(c, (0.0, 1.0)).unwrap())
    }

    #[test]
    fn ramp_ratio_closed_form() {
        let cfg = LeverConfig { y0: 1.0, xr0: 1.0, k0: 1.0 };
        let run = fulcrum_trajectory(lin(&[1.0, 1.0]), lin(&[0.0]), cfg, &OdeSpec::default()).unwrap();
        let p = run.pivot(1.0, Side::Left);
        assert!((p.xr - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.yr - 1.0 / 3.0).abs() < 1e-15);
        let travel = fulcrum_travel_report(&run.sample_xr(100));
        assert!((travel.range - 1.0 / 3.0).abs() < 1e-12);
        assert!(max_parallel_residual(&run, run.input(), 200) < 1e-9);
    }

    #[test]
    fn static_fulcrum() {
        let cfg = LeverConfig { y0: 1.0, xr0: 0.3, k0: 2.0 };
        let x = PiecewiseSignal::from_segment(Segment::sinusoid(0.0, 1.0, 4.0, 0.0, (0.0, 1.0)).unwrap());
        let run = fulcrum_trajectory(lin(&[1.0]), x.clone(), cfg, &OdeSpec::default()).unwrap();
        assert_eq!(fulcrum_travel_report(&run.sample_xr(50)).range, 0.0);
        assert_eq!(max_parallel_residual(&run, &x, 50), 0.0);
    }

    #[test]
    fn lever_reproduces_varspring() {
        let cfg = LeverConfig { y0: 0.5, xr0: 0.1, k0: 3.0 };
        let r = Parameter::from(lin(&[1.0, 1.0]));
        let x = PiecewiseSignal::from_segment(Segment::sinusoid(0.0, 0.2, 7.0, 0.3, (0.0, 1.0)).unwrap());
        let lever = fulcrum_trajectory(r.clone(), x.clone(), cfg, &OdeSpec::default()).unwrap();
        let spring = cfg
            .equivalent_varspring(&r, 0.0)
            .drive(crate::devices::Drive::Position(x))
            .unwrap();
        let m = max_moment_residuals(&spring, &lever, 300);
        assert!(m.moment < 1e-9 && m.kinematic < 1e-8 && m.power < 1e-8, "{m:?}");
    }

    #[test]
    fn horizontal_line_pivot_breaks_parallel_condition() {
        let pivot = PrescribedPivot {
            xr: lin(&[0.0, 0.5]),
            yr: lin(&[0.4]),
        };
        let x = lin(&[0.0, 1.0]);
        assert!(max_parallel_residual(&pivot, &x, 20) > 0.1);
    }
}
