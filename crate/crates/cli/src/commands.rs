//! Subcommand implementations. Each returns the text printed on success.

use std::fmt;
use std::path::{Path, PathBuf};

use oneport_core::devices::{Accuracy, PortBehaviour, SimResult};
use oneport_core::energy::{falsify_passivity, ActivityCertificate};
use oneport_core::mechanism::{coupled_coils_drift, CoilConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{sim_csv, table_csv, write_atomic};
use crate::reproduce::{reproduce, reproduce_all, CaseId, CaseParams, ReproductionCase};
use crate::scenario::{load, Device, DriftScenario, FalsifyScenario, Scenario};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub label: String,
    pub electrical: bool,
    pub samples: usize,
    pub net_energy: f64,
    pub internal_delta: Option<f64>,
    pub max_balance_residual: Option<f64>,
    pub output: PathBuf,
}

impl fmt::Display for SimSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples -> {}\n  net energy {:.12e}",
            self.label,
            self.samples,
            self.output.display(),
            self.net_energy
        )?;
        if let Some(d) = self.internal_delta {
            write!(f, "\n  internal energy delta {d:.12e}")?;
        }
        if let Some(r) = self.max_balance_residual {
            write!(f, "\n  max balance residual {r:.3e}")?;
        }
        if self.electrical {
            write!(f, "\n  electrical run: x = flux linkage, xdot = voltage, F = current")?;
        }
        Ok(())
    }
}

/// Runs a scenario and returns the sampled trajectory.
pub fn run_scenario(scenario: &Scenario, dt: Option<f64>, tol: Option<f64>) -> Result<SimResult, CliError> {
    scenario.validate()?;
    let dt = dt.unwrap_or(scenario.dt);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CliError::Parse(format!("dt must be positive, got {dt}")));
    }
    let acc = scenario.tolerances.accuracy(tol)?;
    let window = (scenario.t_start, scenario.t_end);
    let port: Box<dyn PortBehaviour> = match scenario.device()? {
        Device::Law(law, drive) => Box::new(law.drive_over(drive, window, &acc).map_err(CliError::simulation)?),
        Device::Transformer(t) => Box::new(t),
    };
    SimResult::record(port.as_ref(), dt, &acc.quadrature).map_err(CliError::simulation)
}

pub fn simulate(path: &Path, out: Option<&Path>, dt: Option<f64>, tol: Option<f64>) -> Result<SimSummary, CliError> {
    let scenario: Scenario = load(path)?;
    let output = out
        .map(Path::to_path_buf)
        .or_else(|| scenario.output.clone())
        .ok_or_else(|| CliError::Parse("no output path: pass -o or set \"output\"".into()))?;
    let sim = run_scenario(&scenario, dt, tol)?;
    write_atomic(&output, sim_csv(&sim).as_bytes())?;
    Ok(SimSummary {
        label: sim.label.clone(),
        electrical: sim.electrical,
        samples: sim.len(),
        net_energy: sim.net_energy(),
        internal_delta: sim.internal_delta(),
        max_balance_residual: sim.max_balance_residual(),
        output,
    })
}

/// Runs the requested cases (all of them when `ids` is empty). Fails with
/// [`CliError::Mismatch`] after printing if any case does not reproduce.
pub fn reproduce_cases(
    ids: &[CaseId],
    params: CaseParams,
    tol: Option<f64>,
) -> Result<Vec<ReproductionCase>, CliError> {
    let acc = crate::scenario::Tolerances::default().accuracy(tol)?;
    let results = if ids.is_empty() {
        reproduce_all(params, &acc)
    } else {
        ids.par_iter().map(|&id| (id, reproduce(id, params, &acc))).collect()
    };
    results.into_iter().map(|(_, r)| r).collect()
}

pub fn falsify(path: &Path, n_max: usize, out: &Path, tol: Option<f64>) -> Result<ActivityCertificate, CliError> {
    let scenario: FalsifyScenario = load(path)?;
    let acc = scenario.tolerances.accuracy(tol)?;
    let family = scenario.family.build()?;
    if n_max < 3 {
        return Err(CliError::Parse(format!("--n-max must be at least 3, got {n_max}")));
    }
    let cert = falsify_passivity(scenario.law, scenario.initial_state, family.as_ref(), n_max, &acc)
        .map_err(CliError::simulation)?;
    let json = serde_json::to_string_pretty(&cert).map_err(|e| CliError::Io(e.to_string()))?;
    write_atomic(out, json.as_bytes())?;
    Ok(cert)
}

pub const DRIFT_HEADER: &str = "L,max_abs_gamma,max_abs_residual";

/// One row `[L, max|γ|, max|L·ṁ·γ|]` per inductance, in input order.
pub fn drift_rows(
    scenario: &DriftScenario,
    inductances: &[f64],
    dt: Option<f64>,
    tol: Option<f64>,
) -> Result<Vec<Vec<f64>>, CliError> {
    if let Some(l) = inductances.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(CliError::Parse(format!("inductances must be positive, got {l}")));
    }
    let dt = dt.unwrap_or(scenario.dt);
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CliError::Parse(format!("dt must be positive, got {dt}")));
    }
    let acc: Accuracy = scenario.tolerances.accuracy(tol)?;
    let v1 = scenario.v1.build().map_err(|e| CliError::Parse(format!("v1: {e}")))?;
    let m = scenario.coupling.build().map_err(|e| CliError::Parse(format!("coupling: {e}")))?;
    let (t0, t1) = (scenario.t_start, scenario.t_end);
    let samples = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    inductances
        .par_iter()
        .map(|&l| {
            let cfg = CoilConfig {
                inductance: l,
                coupling: m.clone().into(),
                gamma0: scenario.gamma0,
            };
            let run = coupled_coils_drift(cfg, v1.clone(), t0, t1, &acc.ode).map_err(CliError::simulation)?;
            Ok(vec![l, run.max_abs_gamma(samples), run.max_abs_residual(samples)])
        })
        .collect()
}

pub fn drift_sweep(
    path: &Path,
    inductances: &[f64],
    out: &Path,
    dt: Option<f64>,
    tol: Option<f64>,
) -> Result<Vec<Vec<f64>>, CliError> {
    let scenario: DriftScenario = load(path)?;
    let rows = drift_rows(&scenario, inductances, dt, tol)?;
    write_atomic(out, table_csv(DRIFT_HEADER, &rows).as_bytes())?;
    Ok(rows)
}
