use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EnergyError;
use crate::devices::{Accuracy, Drive, LawKind, OnePortLaw, Parameter, PortBehaviour, SimResult};
use crate::numerics::QuadratureSpec;

/// Running energy balance of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceAudit {
    /// Largest `|∫F·ẋ − ΔI| / (1 + |I|)` over the samples.
    pub max_residual: f64,
    /// `∫F·ẋ` over the whole window.
    pub net_energy: f64,
    /// Smallest `∫F·ẋ + I(t₀)`; negative values would violate passivity.
    pub passivity_margin: f64,
}

/// Samples a port `samples` times and audits its running energy balance.
pub fn balance_residual(
    port: &dyn PortBehaviour,
    samples: usize,
    spec: &QuadratureSpec,
) -> Result<BalanceAudit, EnergyError> {
    let (t0, t1) = port.window();
    let sim = SimResult::record(port, (t1 - t0) / samples.max(1) as f64, spec)?;
    let max_residual = sim.max_balance_residual().ok_or_else(|| {
        EnergyError::InvalidFamily(format!("{} has no internal energy", port.label()))
    })?;
    let i0 = sim.internal[0];
    let passivity_margin = sim.energy.iter().map(|e| e + i0).fold(f64::INFINITY, f64::min);
    Ok(BalanceAudit {
        max_residual,
        net_energy: sim.net_energy(),
        passivity_margin,
    })
}

/// A trajectory for losslessness checks. `matched` marks runs whose port
/// variables, parameter and derivatives agree at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LosslessCase {
    pub parameter: Parameter,
    pub drive: Drive,
    pub window: Option<(f64, f64)>,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LosslessReport {
    pub law: LawKind,
    pub cases: usize,
    pub max_residual: f64,
    pub matched_energies: Vec<f64>,
    pub max_matched_energy: f64,
    pub min_passivity_margin: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks `∫F·ẋ = ΔI` along every case and zero net energy on matched ones.
pub fn verify_losslessness(
    kind: LawKind,
    w0: f64,
    cases: &[LosslessCase],
    accuracy: &Accuracy,
    samples: usize,
    tol: f64,
) -> Result<LosslessReport, EnergyError> {
    if !kind.is_lossless() {
        return Err(EnergyError::NotLossless(kind));
    }
    let audits: Vec<(BalanceAudit, bool)> = cases
        .par_iter()
        .map(|case| {
            let law = OnePortLaw::new(kind, case.parameter.clone()).with_initial_state(w0);
            let run = crate::devices::Trajectory::new(law, case.drive.clone(), case.window, accuracy)?;
            Ok((balance_residual(&run, samples, &accuracy.quadrature)?, case.matched))
        })
        .collect::<Result<_, EnergyError>>()?;
    let max_residual = audits.iter().map(|(a, _)| a.max_residual).fold(0.0, f64::max);
    let matched_energies: Vec<f64> = audits
        .iter()
        .filter(|(_, m)| *m)
        .map(|(a, _)| a.net_energy)
        .collect();
    let max_matched_energy = matched_energies.iter().map(|e| e.abs()).fold(0.0, f64::max);
    let min_passivity_margin = audits
        .iter()
        .map(|(a, _)| a.passivity_margin)
        .fold(f64::INFINITY, f64::min);
    Ok(LosslessReport {
        law: kind,
        cases: cases.len(),
        max_residual,
        matched_energies,
        max_matched_energy,
        min_passivity_margin,
        tol,
        pass: max_residual <= tol && max_matched_energy <= tol,
    })
}
