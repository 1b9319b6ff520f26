use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_cycle_conditions, terminal_energy, CycleReport, EnergyError};
use crate::devices::{
    Accuracy, Drive, DriveKind, LawKind, OnePortLaw, Parameter, PortView, Quantity, Trajectory,
};
use crate::signals::{Observable, PiecewiseSignal, SignalError};

/// Energies above `-ENERGY_TOL` do not count as extraction.
pub const ENERGY_TOL: f64 = 1e-8;
/// Absolute endpoint tolerance for cycle reports.
pub const CYCLE_TOL: f64 = 1e-9;

/// How a family's input signal drives an across-driven law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputRole {
    Displacement,
    Rate,
}

/// One trajectory of a family. Through-driven laws always read the input
/// as their through-variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub index: usize,
    pub parameter: Parameter,
    pub input: PiecewiseSignal,
    pub role: InputRole,
    pub window: (f64, f64),
}

impl FamilyMember {
    pub fn drive_for(&self, kind: LawKind) -> Drive {
        match (kind.drive(), self.role) {
            (DriveKind::Through, _) => Drive::Through(self.input.clone()),
            (DriveKind::Across, InputRole::Displacement) => Drive::Position(self.input.clone()),
            (DriveKind::Across, InputRole::Rate) => Drive::Rate(self.input.clone()),
        }
    }

    pub fn run(&self, kind: LawKind, w0: f64, accuracy: &Accuracy) -> Result<Trajectory, EnergyError> {
        let law = OnePortLaw::new(kind, self.parameter.clone()).with_initial_state(w0);
        Ok(law.drive_over(self.drive_for(kind), self.window, accuracy)?)
    }
}

/// An indexed set of trajectories `n = 1, 2, …`.
pub trait TrajectoryFamily: Sync {
    fn id(&self) -> String;
    fn member(&self, n: usize) -> Result<FamilyMember, EnergyError>;
    /// True when member `n` is one base cycle repeated `n` times.
    fn is_repetition(&self) -> bool {
        false
    }
}

/// One cycle of parameter and input, repeated back to back.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatedCycle {
    pub id: String,
    pub parameter: PiecewiseSignal,
    pub input: PiecewiseSignal,
    pub role: InputRole,
}

impl TrajectoryFamily for RepeatedCycle {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn member(&self, n: usize) -> Result<FamilyMember, EnergyError> {
        if n == 0 {
            return Err(EnergyError::InvalidFamily("members are indexed from 1".into()));
        }
        let start = self.input.start();
        let period = self.input.end() - start;
        Ok(FamilyMember {
            index: n,
            parameter: self.parameter.repeated(n)?.into(),
            input: self.input.repeated(n)?,
            role: self.role,
            window: (start, start + n as f64 * period),
        })
    }

    fn is_repetition(&self) -> bool {
        true
    }
}

type Builder = dyn Fn(usize) -> Result<FamilyMember, SignalError> + Send + Sync;

/// A family given by a constructor function of the index.
pub struct IndexedFamily {
    id: String,
    build: Box<Builder>,
}

impl IndexedFamily {
    pub fn new(
        id: impl Into<String>,
        build: impl Fn(usize) -> Result<FamilyMember, SignalError> + Send + Sync + 'static,
    ) -> Self {
        IndexedFamily {
            id: id.into(),
            build: Box::new(build),
        }
    }
}

impl TrajectoryFamily for IndexedFamily {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn member(&self, n: usize) -> Result<FamilyMember, EnergyError> {
        Ok((self.build)(n)?)
    }
}

/// Least-squares line through `(n, E_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    /// `|slope| / std_error`; infinite for an exact non-flat line.
    pub t_statistic: f64,
    /// Energy of the first cycle, for repetition families.
    pub per_cycle: Option<f64>,
}

impl TrendFit {
    fn fit(indices: &[usize], energies: &[f64]) -> Self {
        let n = energies.len() as f64;
        let xs: Vec<f64> = indices.iter().map(|&i| i as f64).collect();
        let xm = xs.iter().sum::<f64>() / n;
        let ym = energies.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(energies).map(|(x, y)| (x - xm) * (y - ym)).sum();
        let slope = sxy / sxx;
        let intercept = ym - slope * xm;
        let ssr: f64 = xs
            .iter()
            .zip(energies)
            .map(|(x, y)| (y - intercept - slope * x).powi(2))
            .sum();
        let std_error = (ssr / (n - 2.0) / sxx).sqrt();
        let t_statistic = if std_error > 0.0 {
            slope.abs() / std_error
        } else if slope != 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        TrendFit {
            slope,
            intercept,
            std_error,
            t_statistic,
            per_cycle: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EvidenceOfActivity,
    Inconclusive,
}

/// Numerical witness that a law admits unbounded energy extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityCertificate {
    pub law: LawKind,
    pub generator: String,
    pub indices: Vec<usize>,
    /// `E_n = ∫F·ẋ` over member `n`'s window.
    pub energies: Vec<f64>,
    pub cycle_reports: Vec<CycleReport>,
    pub trend: TrendFit,
    pub strictly_decreasing: bool,
    pub energy_tol: f64,
    pub verdict: Verdict,
}

fn cycle_quantities(kind: LawKind) -> [Quantity; 2] {
    [kind.state_quantity(), Quantity::Parameter]
}

fn quantity_label(q: Quantity) -> &'static str {
    match q {
        Quantity::Position => "x",
        Quantity::Rate => "xdot",
        Quantity::Through => "F",
        Quantity::Parameter => "u",
    }
}

/// Evaluates `E_n` for `n = 1..=n_max` and decides whether the family shows
/// unbounded energy extraction.
///
/// Activity is reported when `E_n` is strictly decreasing, the fitted slope
/// is negative and exceeds ten standard errors, and energy has actually been
/// extracted; or, for repetition families, when the base cycle closes and
/// extracts energy.
pub fn falsify_passivity(
    kind: LawKind,
    w0: f64,
    family: &dyn TrajectoryFamily,
    n_max: usize,
    accuracy: &Accuracy,
) -> Result<ActivityCertificate, EnergyError> {
    if n_max < 3 {
        return Err(EnergyError::InvalidFamily(format!("n_max must be at least 3, got {n_max}")));
    }
    let indices: Vec<usize> = (1..=n_max).collect();
    let energies: Vec<f64> = indices
        .par_iter()
        .map(|&n| {
            let member = family.member(n)?;
            let run = member.run(kind, w0, accuracy)?;
            terminal_energy(&run, member.window.0, member.window.1, &accuracy.quadrature)
        })
        .collect::<Result<_, _>>()?;

    let mut cycle_reports = vec![];
    let mut trend = TrendFit::fit(&indices, &energies);
    if family.is_repetition() {
        let base = family.member(1)?;
        let run = base.run(kind, w0, accuracy)?;
        let views: Vec<PortView> = cycle_quantities(kind)
            .into_iter()
            .map(|quantity| PortView { port: &run, quantity })
            .collect();
        let labelled: Vec<(&str, &dyn Observable)> = views
            .iter()
            .map(|v| (quantity_label(v.quantity), v as &dyn Observable))
            .collect();
        cycle_reports.push(check_cycle_conditions(&labelled, base.window.0, base.window.1, 0, CYCLE_TOL));
        trend.per_cycle = Some(energies[0]);
    }

    let strictly_decreasing = energies.windows(2).all(|w| w[1] < w[0]);
    let extracted = energies[energies.len() - 1] < -ENERGY_TOL;
    let by_trend = strictly_decreasing && trend.slope < 0.0 && trend.t_statistic > 10.0 && extracted;
    let by_cycle = family.is_repetition()
        && cycle_reports.iter().all(|r| r.pass)
        && trend.per_cycle.is_some_and(|e| e < -ENERGY_TOL)
        && strictly_decreasing;
    let verdict = if by_trend || by_cycle {
        Verdict::EvidenceOfActivity
    } else {
        Verdict::Inconclusive
    };
    Ok(ActivityCertificate {
        law: kind,
        generator: family.id(),
        indices,
        energies,
        cycle_reports,
        trend,
        strictly_decreasing,
        energy_tol: ENERGY_TOL,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_has_infinite_t() {
        let f = TrendFit::fit(&[1, 2, 3, 4], &[-1.0, -2.0, -3.0, -4.0]);
        assert_eq!(f.slope, -1.0);
        assert_eq!(f.t_statistic, f64::INFINITY);
        let flat = TrendFit::fit(&[1, 2, 3], &[0.5, 0.5, 0.5]);
        assert_eq!(flat.t_statistic, 0.0);
    }

    #[test]
    fn quadratic_needs_long_family() {
        let idx: Vec<usize> = (1..=8).collect();
        let e: Vec<f64> = idx.iter().map(|&n| 2.0 * n as f64 - (n * n) as f64).collect();
        assert!(TrendFit::fit(&idx, &e).t_statistic < 10.0);
        let idx: Vec<usize> = (1..=12).collect();
        let e: Vec<f64> = idx.iter().map(|&n| 2.0 * n as f64 - (n * n) as f64).collect();
        assert!(TrendFit::fit(&idx, &e).t_statistic > 10.0);
    }
}
