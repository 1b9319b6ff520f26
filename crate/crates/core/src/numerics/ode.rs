use serde::{Deserialize, Serialize};

use super::{piece_grid, NumericsError};
use crate::signals::Side;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeSpec {
    /// Base step (s); each breakpoint piece uses the largest equal step ≤ this.
    pub step: f64,
    /// Maximum number of step halvings.
    pub max_refinements: u32,
    /// Agreement required between successive refinements, scaled by `1 + |y|`.
    pub tol: f64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_refinements: 6,
            tol: 1e-9,
        }
    }
}

/// Node values of an RK4 run with cubic Hermite dense output.
///
/// Each node stores the field evaluated from both sides so interpolation
/// inside a step only uses one-sided data from that step.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    dim: usize,
    times: Vec<f64>,
    states: Vec<f64>,
    rates_right: Vec<f64>,
    rates_left: Vec<f64>,
    refinements: u32,
    discrepancy: f64,
}

impl OdeSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn final_state(&self) -> &[f64] {
        self.node(self.times.len() - 1)
    }

    /// Number of halvings applied before convergence.
    pub fn refinements(&self) -> u32 {
        self.refinements
    }

    /// Largest scaled disagreement between the last two refinements.
    pub fn discrepancy(&self) -> f64 {
        self.discrepancy
    }

    fn step_index(&self, t: f64) -> usize {
        let n = self.times.len();
        let idx = self.times.partition_point(|s| *s <= t);
        idx.clamp(1, n - 1) - 1
    }

    /// Component `i` of the state at `t` (clamped to the solved range).
    pub fn component(&self, t: f64, i: usize) -> f64 {
        self.hermite(t, i).0
    }

    /// Time derivative of component `i` at `t` from the dense interpolant.
    pub fn component_rate(&self, t: f64, i: usize) -> f64 {
        self.hermite(t, i).1
    }

    pub fn state(&self, t: f64) -> Vec<f64> {
        (0..self.dim).map(|i| self.component(t, i)).collect()
    }

    fn hermite(&self, t: f64, i: usize) -> (f64, f64) {
        let k = self.step_index(t);
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let y0 = self.states[k * self.dim + i];
        let y1 = self.states[(k + 1) * self.dim + i];
        let m0 = self.rates_right[k * self.dim + i] * h;
        let m1 = self.rates_left[(k + 1) * self.dim + i] * h;
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let rate = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        (value, rate)
    }
}

fn rk4_pass<F>(field: &F, y0: &[f64], grid: &[f64], steps: &[usize]) -> OdeSolution
where
    F: Fn(f64, Side, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let total: usize = steps.iter().sum();
    let mut times = Vec::with_capacity(total + 1);
    let mut states = Vec::with_capacity((total + 1) * dim);
    let mut rates_right = vec![0.0; (total + 1) * dim];
    let mut rates_left = vec![0.0; (total + 1) * dim];
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    let mut tmp = vec![0.0; dim];

    times.push(grid[0]);
    states.extend_from_slice(&y);
    field(grid[0], Side::Left, &y, &mut rates_left[..dim]);
    let mut node = 0;
    for (piece, n) in steps.iter().enumerate() {
        let (a, b) = (grid[piece], grid[piece + 1]);
        let h = (b - a) / *n as f64;
        for j in 0..*n {
            let t = a + j as f64 * h;
            let t_next = if j + 1 == *n { b } else { a + (j + 1) as f64 * h };
            field(t, Side::Right, &y, &mut k1);
            rates_right[node * dim..(node + 1) * dim].copy_from_slice(&k1);
            for d in 0..dim {
                tmp[d] = y[d] + 0.5 * h * k1[d];
            }
            field(t + 0.5 * h, Side::Right, &tmp, &mut k2);
            for d in 0..dim {
                tmp[d] = y[d] + 0.5 * h * k2[d];
            }
            field(t + 0.5 * h, Side::Right, &tmp, &mut k3);
            for d in 0..dim {
                tmp[d] = y[d] + h * k3[d];
            }
            field(t_next, Side::Left, &tmp, &mut k4);
            for d in 0..dim {
                y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
            }
            node += 1;
            times.push(t_next);
            states.extend_from_slice(&y);
            field(t_next, Side::Left, &y, &mut rates_left[node * dim..(node + 1) * dim]);
        }
    }
    let last = node;
    let mut end_rate = vec![0.0; dim];
    field(times[last], Side::Left, &y, &mut end_rate);
    rates_right[last * dim..(last + 1) * dim].copy_from_slice(&end_rate);
    OdeSolution {
        dim,
        times,
        states,
        rates_right,
        rates_left,
        refinements: 0,
        discrepancy: 0.0,
    }
}

/// Classical RK4 with step halving until two successive refinements agree
/// at every node of the coarser run.
///
/// `field(t, side, y, dy)` writes `dy/dt`. Steps are aligned to the supplied
/// breakpoints; the field is evaluated with [`Side::Left`] at the end of each
/// step and [`Side::Right`] otherwise, so no stage sees the far side of a
/// discontinuity.
pub fn solve_ode<F>(
    field: F,
    y0: &[f64],
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    spec: &OdeSpec,
) -> Result<OdeSolution, NumericsError>
where
    F: Fn(f64, Side, &[f64], &mut [f64]),
{
    if !(spec.step > 0.0 && spec.tol > 0.0) {
        return Err(NumericsError::InvalidSpec("ODE step and tolerance must be positive"));
    }
    if !(t0.is_finite() && t1.is_finite()) || t0 >= t1 {
        return Err(NumericsError::InvalidInterval(t0, t1));
    }
    let grid = piece_grid(t0, t1, breakpoints);
    let mut steps: Vec<usize> = grid
        .windows(2)
        .map(|w| ((w[1] - w[0]) / spec.step).ceil().max(1.0) as usize)
        .collect();
    let mut coarse = rk4_pass(&field, y0, &grid, &steps);
    let mut discrepancy = f64::INFINITY;
    for level in 1..=spec.max_refinements {
        steps.iter_mut().for_each(|n| *n *= 2);
        let mut fine = rk4_pass(&field, y0, &grid, &steps);
        let dim = y0.len();
        discrepancy = 0.0;
        for k in 0..coarse.times.len() {
            for d in 0..dim {
                let c = coarse.states[k * dim + d];
                let f = fine.states[2 * k * dim + d];
                if !f.is_finite() {
                    return Err(NumericsError::NonFinite(fine.times[2 * k]));
                }
                discrepancy = f64::max(discrepancy, (c - f).abs() / (1.0 + f.abs()));
            }
        }
        if discrepancy <= spec.tol {
            fine.refinements = level;
            fine.discrepancy = discrepancy;
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(NumericsError::OdeNotConverged {
        refinements: spec.max_refinements,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_keeps_state() {
        let sol = solve_ode(
            |_, _, _, dy: &mut [f64]| dy[0] = 0.0,
            &[3.0],
            0.0,
            1.0,
            &[],
            &OdeSpec::default(),
        )
        .unwrap();
        assert!(sol.times().iter().enumerate().all(|(k, _)| sol.node(k)[0] == 3.0));
        assert_eq!(sol.component(0.37, 0), 3.0);
    }

    #[test]
    fn ramp_driven_quadrature() {
        // ẇ = −ṙx with r = 1 + t, x = t gives w = −t²/2
        let sol = solve_ode(
            |t, _, _, dy: &mut [f64]| dy[0] = -t,
            &[0.0],
            0.0,
            1.0,
            &[],
            &OdeSpec::default(),
        )
        .unwrap();
        assert!((sol.final_state()[0] + 0.5).abs() < 1e-14);
        assert!((sol.component(0.4321, 0) + 0.4321f64.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn constant_drift() {
        let sol = solve_ode(
            |_, _, _, dy: &mut [f64]| dy[0] = 0.01,
            &[0.0],
            0.0,
            1.0,
            &[],
            &OdeSpec::default(),
        )
        .unwrap();
        assert!((sol.final_state()[0] - 0.01).abs() < 1e-15);
    }

    #[test]
    fn cubic_solution_exact_in_one_step() {
        // y = 1 + t − 2t² + t³
        let spec = OdeSpec {
            step: 1.0,
            ..OdeSpec::default()
        };
        let sol = solve_ode(
            |t, _, _, dy: &mut [f64]| dy[0] = 1.0 - 4.0 * t + 3.0 * t * t,
            &[1.0],
            0.0,
            1.0,
            &[],
            &spec,
        )
        .unwrap();
        assert!((sol.final_state()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_dependent_field_converges() {
        let sol = solve_ode(
            |_, _, y: &[f64], dy: &mut [f64]| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[0.0, 1.0],
            0.0,
            3.0,
            &[],
            &OdeSpec::default(),
        )
        .unwrap();
        assert!((sol.final_state()[0] - 3f64.sin()).abs() < 1e-11);
        assert!((sol.component(1.234, 1) - 1.234f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn discontinuous_field_respects_breakpoint() {
        // ẏ = 1 before t = 0.5, −1 after; y(1) = 0 only if no stage straddles
        let f = |t: f64, side: Side, _: &[f64], dy: &mut [f64]| {
            let after = t > 0.5 || (t == 0.5 && side == Side::Right);
            dy[0] = if after { -1.0 } else { 1.0 };
        };
        let spec = OdeSpec {
            step: 0.3,
            ..OdeSpec::default()
        };
        let sol = solve_ode(f, &[0.0], 0.0, 1.0, &[0.5], &spec).unwrap();
        assert!(sol.final_state()[0].abs() < 1e-15);
        assert!((sol.component(0.5, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn refinement_limit() {
        let spec = OdeSpec {
            step: 0.5,
            max_refinements: 1,
            tol: 1e-15,
        };
        let err = solve_ode(
            |_, _, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0] + 1.0,
            &[0.0],
            0.0,
            1.4,
            &[],
            &spec,
        )
        .unwrap_err();
        assert!(matches!(err, NumericsError::OdeNotConverged { .. }));
    }
}
