use serde::Serialize;

use super::{DeviceError, PortBehaviour};
use crate::numerics::{integrate, QuadratureSpec};
use crate::signals::Side;

/// Uniformly sampled port trajectory.
///
/// Samples sit at `t₀ + k·dt`; the window end is appended when it is not on
/// the grid. Under the force–current analogy `x`, `xdot`, `force` read as
/// flux linkage, voltage and current.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub label: String,
    pub electrical: bool,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
    pub force: Vec<f64>,
    pub parameter: Vec<f64>,
    pub power: Vec<f64>,
    /// Running `∫F·ẋ` from the first sample.
    pub energy: Vec<f64>,
    /// Stored energy; NaN for laws without one.
    pub internal: Vec<f64>,
}

pub(crate) fn sample_grid(t0: f64, t1: f64, dt: f64) -> Vec<f64> {
    let n = ((t1 - t0) / dt * (1.0 + 1e-12)).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| t0 + k as f64 * dt).collect();
    let last = grid[grid.len() - 1];
    if t1 - last > 1e-9 * dt {
        grid.push(t1);
    } else {
        let k = grid.len() - 1;
        grid[k] = t1;
    }
    grid
}

impl SimResult {
    pub fn record(
        port: &dyn PortBehaviour,
        dt: f64,
        spec: &QuadratureSpec,
    ) -> Result<Self, DeviceError> {
        let (t0, t1) = port.window();
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(DeviceError::InvalidInput(format!("sample step must be positive, got {dt}")));
        }
        let grid = sample_grid(t0, t1, dt);
        let mut bps = port.quadrature_nodes();
        bps.sort_by(f64::total_cmp);
        let n = grid.len();
        let mut out = SimResult {
            label: port.label(),
            electrical: port.is_electrical(),
            t: Vec::with_capacity(n),
            x: Vec::with_capacity(n),
            xdot: Vec::with_capacity(n),
            force: Vec::with_capacity(n),
            parameter: Vec::with_capacity(n),
            power: Vec::with_capacity(n),
            energy: Vec::with_capacity(n),
            internal: Vec::with_capacity(n),
        };
        let power = |t: f64| port.sample(t, Side::Right).power();
        let mut energy = 0.0;
        for (k, &t) in grid.iter().enumerate() {
            if k > 0 {
                let lo = bps.partition_point(|b| *b <= grid[k - 1]);
                let hi = bps.partition_point(|b| *b < t);
                energy += integrate(power, grid[k - 1], t, &bps[lo..hi.max(lo)], spec)?.value;
            }
            let side = if k + 1 == n { Side::Left } else { Side::Right };
            let s = port.sample(t, side);
            out.t.push(t);
            out.x.push(s.position.unwrap_or(f64::NAN));
            out.xdot.push(s.rate);
            out.force.push(s.through);
            out.parameter.push(s.parameter.unwrap_or(f64::NAN));
            out.power.push(s.power());
            out.energy.push(energy);
            out.internal.push(s.internal.unwrap_or(f64::NAN));
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Energy supplied over the whole run.
    pub fn net_energy(&self) -> f64 {
        self.energy.last().copied().unwrap_or(0.0)
    }

    pub fn internal_delta(&self) -> Option<f64> {
        let first = *self.internal.first()?;
        let last = *self.internal.last()?;
        (first.is_finite() && last.is_finite()).then_some(last - first)
    }

    /// Largest `|∫F·ẋ − ΔI| / (1 + |I|)` over the samples, for laws with an
    /// internal energy.
    pub fn max_balance_residual(&self) -> Option<f64> {
        let i0 = *self.internal.first()?;
        if !i0.is_finite() {
            return None;
        }
        Some(
            self.energy
                .iter()
                .zip(&self.internal)
                .map(|(e, i)| (e - (i - i0)).abs() / (1.0 + i.abs()))
                .fold(0.0, f64::max),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::{Drive, LawKind, OnePortLaw};
    use crate::signals::{PiecewiseSignal, Segment};

    #[test]
    fn grid_includes_window_end() {
        let g = sample_grid(0.0, 1.0, 0.3);
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        let g = sample_grid(0.0, 1.0, 0.001);
        assert_eq!(g.len(), 1001);
        assert_eq!(g[1000], 1.0);
    }

    #[test]
    fn varspring_run_balances() {
        let lin = |c: &[f64]| PiecewiseSignal::from_segment(Segment::polynomial(c, (0.0, 1.0)).unwrap());
        let run = OnePortLaw::new(LawKind::VarspringOde, lin(&[1.0, 1.0]))
            .drive(Drive::Position(lin(&[0.0, 1.0])))
            .unwrap();
        let sim = SimResult::record(&run, 1e-2, &QuadratureSpec::default()).unwrap();
        assert_eq!(sim.len(), 101);
        assert!((sim.force[100] - 3.0).abs() < 1e-9);
        assert!((sim.net_energy() - 1.125).abs() < 1e-9);
        assert!(sim.max_balance_residual().unwrap() < 1e-9);
        assert!((sim.internal_delta().unwrap() - 1.125).abs() < 1e-9);
    }
}
