use serde::Serialize;

use super::MechanismError;
use crate::devices::{DeviceError, Parameter};
use crate::energy::{check_cycle_conditions, CycleReport};
use crate::numerics::{integrate, solve_ode, OdeSolution, OdeSpec, QuadratureSpec};
use crate::signals::{PiecewiseSignal, Side};

/// Two coils of equal self-inductance `L` with coupling coefficient `m(t)`,
/// so that the mutual inductance is `m·L`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoilConfig {
    pub inductance: f64,
    pub coupling: Parameter,
    /// Flux variable `γ` at the start of the run.
    pub gamma0: f64,
}

impl CoilConfig {
    fn validate(&self, t0: f64, t1: f64) -> Result<(), MechanismError> {
        if !(self.inductance > 0.0) || !self.gamma0.is_finite() {
            return Err(MechanismError::InvalidConfig(format!(
                "coil inductance must be positive (L = {})",
                self.inductance
            )));
        }
        if !(t0 < t1) || self.coupling.start() > t0 || self.coupling.domain_end() < t1 {
            return Err(DeviceError::DomainMismatch {
                need_start: t0,
                need_end: t1,
                have_start: self.coupling.start(),
                have_end: self.coupling.domain_end(),
            }
            .into());
        }
        Ok(())
    }

    fn breakpoints(&self, signal: &PiecewiseSignal) -> Vec<f64> {
        let mut b = signal.breakpoints();
        b.extend(self.coupling.breakpoints());
        b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoilSample {
    pub t: f64,
    pub gamma: f64,
    pub v2: f64,
    /// `L·ṁ·γ`, the part of `v₂` not explained by the ideal-transformer law.
    pub residual: f64,
}

/// Coupled coils driven by `v₁` with the secondary open-circuited.
#[derive(Debug, Clone, PartialEq)]
pub struct CoilDrift {
    config: CoilConfig,
    v1: PiecewiseSignal,
    sol: OdeSolution,
    window: (f64, f64),
}

/// Integrates `γ̇ = v₁/L`; then `v₂ = m·v₁ + L·ṁ·γ`.
pub fn coupled_coils_drift(
    config: CoilConfig,
    v1: PiecewiseSignal,
    t0: f64,
    t1: f64,
    spec: &OdeSpec,
) -> Result<CoilDrift, MechanismError> {
    config.validate(t0, t1)?;
    let l = config.inductance;
    let sol = solve_ode(
        |t, side, _y, dy: &mut [f64]| dy[0] = v1.at(t, 0, side) / l,
        &[config.gamma0],
        t0,
        t1,
        &config.breakpoints(&v1),
        spec,
    )?;
    Ok(CoilDrift {
        config,
        v1,
        sol,
        window: (t0, t1),
    })
}

impl CoilDrift {
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn sample(&self, t: f64, side: Side) -> CoilSample {
        let m = self.config.coupling.jet(t, side);
        let gamma = self.sol.component(t, 0);
        let residual = self.config.inductance * m.d1() * gamma;
        CoilSample {
            t,
            gamma,
            v2: m.value() * self.v1.at(t, 0, side) + residual,
            residual,
        }
    }

    /// `samples + 1` equally spaced samples over the window.
    pub fn samples(&self, samples: usize) -> Vec<CoilSample> {
        let (t0, t1) = self.window;
        let n = samples.max(1);
        (0..=n)
            .map(|k| {
                let side = if k == n { Side::Left } else { Side::Right };
                self.sample(t0 + (t1 - t0) * k as f64 / n as f64, side)
            })
            .collect()
    }

    pub fn max_abs_residual(&self, samples: usize) -> f64 {
        self.samples(samples).iter().map(|s| s.residual.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_gamma(&self, samples: usize) -> f64 {
        self.samples(samples).iter().map(|s| s.gamma.abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoilEnergy {
    /// `∫i₂·v₂` with `v₂ = L·d/dt(m²·i₂)`.
    pub terminal: f64,
    /// `(L/2)·∫(m²)˙·i₂²`.
    pub closed_form: f64,
    /// Order-0 cycle check on `m` and `i₂`.
    pub cycle: CycleReport,
}

/// Energy delivered at the secondary with the primary open-circuited.
pub fn coupled_coils_energy(
    config: &CoilConfig,
    i2: &PiecewiseSignal,
    t0: f64,
    t1: f64,
    spec: &QuadratureSpec,
) -> Result<CoilEnergy, MechanismError> {
    config.validate(t0, t1)?;
    if i2.start() > t0 || i2.domain_end() < t1 {
        return Err(DeviceError::DomainMismatch {
            need_start: t0,
            need_end: t1,
            have_start: i2.start(),
            have_end: i2.domain_end(),
        }
        .into());
    }
    let l = config.inductance;
    let bps = config.breakpoints(i2);
    let m2 = |t: f64| {
        let m = config.coupling.jet(t, Side::Right);
        m * m
    };
    let terminal = integrate(
        |t| {
            let i = i2.jet_at(t, Side::Right);
            i.value() * l * (m2(t) * i).d1()
        },
        t0,
        t1,
        &bps,
        spec,
    )?
    .value;
    let closed_form = integrate(
        |t| {
            let i = i2.at(t, 0, Side::Right);
            0.5 * l * m2(t).d1() * i * i
        },
        t0,
        t1,
        &bps,
        spec,
    )?
    .value;
    let cycle = check_cycle_conditions(&[("m", &config.coupling), ("i2", i2)], t0, t1, 0, 1e-9);
    Ok(CoilEnergy {
        terminal,
        closed_form,
        cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::Segment;
    use std::f64::consts::PI;

    fn sig(seg: Segment) -> PiecewiseSignal {
        PiecewiseSignal::from_segment(seg)
    }

    #[test]
    fn constant_coupling_has_no_drift_residual() {
        let cfg = CoilConfig {
            inductance: 2.0,
            coupling: sig(Segment::polynomial(&[0.5], (0.0, 1.0)).unwrap()).into(),
            gamma0: 0.0,
        };
        let v1 = sig(Segment::sinusoid(0.0, 1.0, 2.0 * PI, 0.0, (0.0, 1.0)).unwrap());
        let run = coupled_coils_drift(cfg, v1, 0.0, 1.0, &OdeSpec::default()).unwrap();
        assert_eq!(run.max_abs_residual(50), 0.0);
        // γ = (1 − cos 2πt)/(2π·L)
        let g = run.sample(0.5, Side::Right).gamma;
        assert!((g - 2.0 / (2.0 * PI * 2.0)).abs() < 1e-10);
    }

    #[test]
    fn dc_drive_drifts_linearly() {
        let cfg = CoilConfig {
            inductance: 1.0,
            coupling: sig(Segment::polynomial(&[0.5, 0.25], (0.0, 2.0)).unwrap()).into(),
            gamma0: 0.0,
        };
        let v1 = PiecewiseSignal::constant(3.0, (0.0, 2.0)).unwrap();
        let run = coupled_coils_drift(cfg, v1, 0.0, 2.0, &OdeSpec::default()).unwrap();
        let s = run.sample(2.0, Side::Left);
        assert!((s.gamma - 6.0).abs() < 1e-12);
        assert!((s.residual - 1.5).abs() < 1e-12);
        assert!((s.v2 - (3.0 + 1.5)).abs() < 1e-12);
    }

    #[test]
    fn returning_coupling_with_constant_current() {
        let m2 = sig(Segment::sinusoid(1.5, -0.5, 2.0 * PI, PI / 2.0, (0.0, 1.0)).unwrap());
        let cfg = CoilConfig {
            inductance: 0.7,
            coupling: Parameter::from(m2).sqrt(),
            gamma0: 0.0,
        };
        let i2 = PiecewiseSignal::constant(1.0, (0.0, 1.0)).unwrap();
        let e = coupled_coils_energy(&cfg, &i2, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!(e.terminal.abs() < 1e-12 && e.closed_form.abs() < 1e-12);
        assert!(e.cycle.pass);
    }

    #[test]
    fn terminal_matches_closed_form_on_a_cycle() {
        let cfg = CoilConfig {
            inductance: 1.3,
            coupling: sig(Segment::sinusoid(0.5, 0.3, 2.0 * PI, 0.0, (0.0, 1.0)).unwrap()).into(),
            gamma0: 0.0,
        };
        let i2 = sig(Segment::sinusoid(0.2, 1.0, 2.0 * PI, 0.4, (0.0, 1.0)).unwrap());
        let e = coupled_coils_energy(&cfg, &i2, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!(e.cycle.pass);
        assert!(e.closed_form.abs() > 1e-3);
        assert!((e.terminal - e.closed_form).abs() < 1e-10, "{e:?}");
    }
}
