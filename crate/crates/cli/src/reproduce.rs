//! Reproduction of the worked examples and device identities.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use oneport_core::catalog::{self, ex3_energy, ex3_force, ex4_energy, ex4_force};
use oneport_core::devices::{
    ideal_transformer, max_dual_residual, parallel_plate_capacitance, Accuracy, LawKind, Parameter,
    PortBehaviour, SimResult, TwoPortKind, TwoPortLaw,
};
use oneport_core::energy::{terminal_energy, FamilyMember};
use oneport_core::mechanism::{
    cone_ratio, coupled_coils_drift, fulcrum_trajectory, fulcrum_travel_report, max_moment_residuals,
    max_parallel_residual, CoilConfig, ConeGeometry, LeverConfig, PrescribedPivot,
};
use oneport_core::numerics::composite_simpson;
use oneport_core::signals::{PiecewiseSignal, Segment, Side};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6,
    VarspringBalance,
    VarinerterBalance,
    DualForm,
    Fulcrum,
    Cone,
    CoilDrift,
    Capacitor,
    Inductor,
}

impl CaseId {
    pub const ALL: [CaseId; 14] = [
        CaseId::Ex1,
        CaseId::Ex2,
        CaseId::Ex3,
        CaseId::Ex4,
        CaseId::Ex5,
        CaseId::Ex6,
        CaseId::VarspringBalance,
        CaseId::VarinerterBalance,
        CaseId::DualForm,
        CaseId::Fulcrum,
        CaseId::Cone,
        CaseId::CoilDrift,
        CaseId::Capacitor,
        CaseId::Inductor,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CaseId::Ex1 => "ex1",
            CaseId::Ex2 => "ex2",
            CaseId::Ex3 => "ex3",
            CaseId::Ex4 => "ex4",
            CaseId::Ex5 => "ex5",
            CaseId::Ex6 => "ex6",
            CaseId::VarspringBalance => "varspring-balance",
            CaseId::VarinerterBalance => "varinerter-balance",
            CaseId::DualForm => "dual-form",
            CaseId::Fulcrum => "fulcrum",
            CaseId::Cone => "cone",
            CaseId::CoilDrift => "coil-drift",
            CaseId::Capacitor => "capacitor",
            CaseId::Inductor => "inductor",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CaseId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| CliError::Parse(format!("unknown case id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    /// Family index or repetition count.
    pub n: Option<usize>,
    /// Coil self-inductance.
    pub l: Option<f64>,
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Published closed form.
    ClosedForm,
    /// Independent brute-force evaluation.
    Oracle,
    /// Algebraic identity that must hold to rounding.
    Identity,
    /// Hand calculation on a simple signal.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Within { expected: f64, tol: f64 },
    Below { bound: f64 },
    Above { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    pub computed: f64,
    pub criterion: Criterion,
    pub source: Source,
    pub note: String,
    pub pass: bool,
}

impl Check {
    fn within(quantity: &str, computed: f64, expected: f64, tol: f64, source: Source, note: &str) -> Self {
        Check {
            quantity: quantity.into(),
            computed,
            criterion: Criterion::Within { expected, tol },
            source,
            note: note.into(),
            pass: (computed - expected).abs() <= tol,
        }
    }

    fn below(quantity: &str, computed: f64, bound: f64, source: Source, note: &str) -> Self {
        Check {
            quantity: quantity.into(),
            computed,
            criterion: Criterion::Below { bound },
            source,
            note: note.into(),
            pass: computed < bound,
        }
    }

    fn above(quantity: &str, computed: f64, bound: f64, source: Source, note: &str) -> Self {
        Check {
            quantity: quantity.into(),
            computed,
            criterion: Criterion::Above { bound },
            source,
            note: note.into(),
            pass: computed > bound,
        }
    }
}

/// A published figure that disagrees with the oracle the case is checked
/// against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub stated: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproductionCase {
    pub id: CaseId,
    pub params: CaseParams,
    pub checks: Vec<Check>,
    pub discrepancies: Vec<Discrepancy>,
    pub pass: bool,
}

impl ReproductionCase {
    /// Looks up a check by quantity name.
    pub fn check(&self, quantity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.quantity == quantity)
    }
}

impl fmt::Display for ReproductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut params = vec![];
        if let Some(n) = self.params.n {
            params.push(format!("n={n}"));
        }
        if let Some(l) = self.params.l {
            params.push(format!("L={l}"));
        }
        let params = if params.is_empty() { String::new() } else { format!(" ({})", params.join(", ")) };
        writeln!(f, "{}{} {}", self.id, params, if self.pass { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            let crit = match c.criterion {
                Criterion::Within { expected, tol } => format!(
                    "expected {expected:.12e} |diff| {:.3e} <= {tol:.1e}",
                    (c.computed - expected).abs()
                ),
                Criterion::Below { bound } => format!("< {bound:.1e}"),
                Criterion::Above { bound } => format!("> {bound:.1e}"),
            };
            writeln!(
                f,
                "  [{}] {:<24} {:.12e}  {}  ({:?}: {})",
                if c.pass { "ok" } else { "FAIL" },
                c.quantity,
                c.computed,
                crit,
                c.source,
                c.note
            )?;
        }
        for d in &self.discrepancies {
            writeln!(
                f,
                "  DISCREPANCY {}: stated {} vs oracle {:.12e}; checked against the oracle",
                d.quantity, d.stated, d.oracle
            )?;
        }
        Ok(())
    }
}

const ENERGY_TOL: f64 = 1e-8;
const FORCE_TOL: f64 = 1e-9;
const ORACLE_PANELS: usize = 2000;

fn energy_of(member: &FamilyMember, kind: LawKind, acc: &Accuracy) -> Result<(f64, impl PortBehaviour), CliError> {
    let run = member.run(kind, 0.0, acc).map_err(CliError::simulation)?;
    let e = terminal_energy(&run, member.window.0, member.window.1, &acc.quadrature).map_err(CliError::simulation)?;
    Ok((e, run))
}

/// `½∫u̇s²` by composite Simpson, independent of the adaptive quadrature.
fn half_weighted_square(member: &FamilyMember, s: &PiecewiseSignal) -> f64 {
    let u = &member.parameter;
    let mut bps = u.breakpoints();
    bps.extend(s.breakpoints());
    let (t0, t1) = member.window;
    composite_simpson(
        |t| {
            let v = s.eval(t, 0).unwrap_or(0.0);
            0.5 * u.jet(t, Side::Right).d1() * v * v
        },
        t0,
        t1,
        &bps,
        ORACLE_PANELS,
    )
}

fn member(id: &str, n: usize) -> Result<FamilyMember, CliError> {
    catalog::family(id)
        .and_then(|f| f.member(n))
        .map_err(CliError::simulation)
}

fn poly(c: &[f64], interval: (f64, f64)) -> PiecewiseSignal {
    PiecewiseSignal::from_segment(Segment::polynomial(c, interval).expect("static segment"))
}

fn sine(offset: f64, amp: f64, omega: f64, interval: (f64, f64)) -> PiecewiseSignal {
    PiecewiseSignal::from_segment(Segment::sinusoid(offset, amp, omega, 0.0, interval).expect("static segment"))
}

fn repetitions(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Parse("n must be at least 1".into()));
    }
    Ok(n)
}

/// Cycle energy of a repeated example family with an oracle expected value.
fn oracle_cycle(
    checks: &mut Vec<Check>,
    discrepancies: &mut Vec<Discrepancy>,
    family: &str,
    kind: LawKind,
    n: usize,
    stated: Option<f64>,
    acc: &Accuracy,
) -> Result<(), CliError> {
    let m = member(family, n)?;
    let (e, run) = energy_of(&m, kind, acc)?;
    // the family input is x, xdot or the through-variable, whichever is squared
    let oracle = half_weighted_square(&m, &m.input);
    checks.push(Check::within(
        "energy",
        e,
        oracle,
        ENERGY_TOL * n as f64,
        Source::Oracle,
        "composite Simpson of 1/2 * int(du/dt * s^2)",
    ));
    checks.push(Check::below("energy sign", e, 0.0, Source::Oracle, "energy is extracted"));
    if kind == LawKind::SmoothingSpring {
        let (t0, t1) = m.window;
        let f0 = run.sample(t0, Side::Right).through;
        let f1 = run.sample(t1, Side::Left).through;
        checks.push(Check::within(
            "F(t1) - F(t0)",
            f1 - f0,
            0.0,
            FORCE_TOL,
            Source::ClosedForm,
            "int(k xdot) = 0 over the cycle",
        ));
    }
    if let Some(stated) = stated {
        let stated = stated * n as f64;
        if (stated - oracle).abs() > ENERGY_TOL {
            discrepancies.push(Discrepancy {
                quantity: "energy".into(),
                stated,
                oracle,
            });
        }
    }
    Ok(())
}

fn closed_cycle(checks: &mut Vec<Check>, family: &str, kind: LawKind, n: usize, acc: &Accuracy) -> Result<(), CliError> {
    let m = member(family, n)?;
    let (e, _) = energy_of(&m, kind, acc)?;
    checks.push(Check::within(
        "energy",
        e,
        -(n as f64),
        ENERGY_TOL * n as f64,
        Source::ClosedForm,
        "E = -1 per cycle",
    ));
    Ok(())
}

/// Runs one case with its default parameters filled in.
pub fn reproduce(id: CaseId, params: CaseParams, acc: &Accuracy) -> Result<ReproductionCase, CliError> {
    let mut checks = vec![];
    let mut discrepancies = vec![];
    let mut used = CaseParams::default();
    match id {
        CaseId::Ex1 | CaseId::Ex5 => {
            let n = repetitions(params.n.unwrap_or(1))?;
            used.n = Some(n);
            let (family, kind) = if id == CaseId::Ex1 {
                ("ex1-cycle", LawKind::DirectSpring)
            } else {
                ("ex1-rate-cycle", LawKind::DirectInerter)
            };
            closed_cycle(&mut checks, family, kind, n, acc)?;
        }
        CaseId::Ex2 | CaseId::Ex6 => {
            let n = repetitions(params.n.unwrap_or(1))?;
            used.n = Some(n);
            let (family, kind, stated) = if id == CaseId::Ex2 {
                ("ex2-cycle", LawKind::SmoothingSpring, Some(-1.0))
            } else {
                ("ex2-rate-cycle", LawKind::FlyweightInerter, None)
            };
            oracle_cycle(&mut checks, &mut discrepancies, family, kind, n, stated, acc)?;
        }
        CaseId::Ex3 => {
            let n = repetitions(params.n.unwrap_or(3))?;
            used.n = Some(n);
            let m = catalog::ex3_member(n).map_err(CliError::simulation)?;
            let (e, run) = energy_of(&m, LawKind::UpSmoothingSpring, acc)?;
            checks.push(Check::within("energy", e, ex3_energy(n), ENERGY_TOL, Source::ClosedForm, "2n - n^2"));
            let f = run.sample(n as f64, Side::Right).through;
            checks.push(Check::within("F(n)", f, ex3_force(n), FORCE_TOL, Source::ClosedForm, "2 - 2n"));
        }
        CaseId::Ex4 => {
            let n = params.n.unwrap_or(1);
            used.n = Some(n);
            let m = catalog::ex4_member(n).map_err(CliError::simulation)?;
            let (e, run) = energy_of(&m, LawKind::SemiSmoothingSpring, acc)?;
            checks.push(Check::within("energy", e, ex4_energy(n), ENERGY_TOL, Source::ClosedForm, "1 - (4n+3)pi/8"));
            let f = run.sample(m.window.1, Side::Left).through;
            checks.push(Check::within("F(t1)", f, ex4_force(n), ENERGY_TOL, Source::ClosedForm, "(4n+3)pi/8 - 2"));
        }
        CaseId::VarspringBalance => {
            let r = poly(&[1.0, 1.0], (0.0, 1.0));
            let x = poly(&[0.0, 1.0], (0.0, 1.0));
            for (label, kind) in [("ode", LawKind::VarspringOde), ("integral", LawKind::VarspringIntegral)] {
                let run = oneport_core::devices::OnePortLaw::new(kind, r.clone())
                    .drive(oneport_core::devices::Drive::Position(x.clone()))
                    .map_err(CliError::simulation)?;
                balance_checks(&mut checks, label, &run, 3.0, 1.125, acc)?;
            }
        }
        CaseId::VarinerterBalance => {
            let run = oneport_core::devices::varinerter(poly(&[1.0, 1.0], (0.0, 1.0)), poly(&[0.0, 0.0, 0.5], (0.0, 1.0)))
                .map_err(CliError::simulation)?;
            balance_checks(&mut checks, "varinerter", &run, 6.0, 2.0, acc)?;
        }
        CaseId::DualForm => {
            let r = poly(&[1.0, 1.0], (0.0, 1.0));
            let x = poly(&[0.0, 1.0], (0.0, 1.0));
            let p = Parameter::from(r.clone()).reciprocal();
            let ode = oneport_core::devices::varspring_ode(r.clone(), x.clone(), 0.0).map_err(CliError::simulation)?;
            let int = oneport_core::devices::varspring_integral(r, x).map_err(CliError::simulation)?;
            let note = "xdot - p d/dt(pF) with p = 1/r";
            checks.push(Check::below("dual residual (ode)", max_dual_residual(&p, &ode, 1000), 1e-7, Source::Identity, note));
            checks.push(Check::below("dual residual (integral)", max_dual_residual(&p, &int, 1000), 1e-7, Source::Identity, note));
            let pu = Parameter::from(poly(&[1.0], (0.0, 1.0)));
            let unit = oneport_core::devices::varspring_dual(pu.clone(), poly(&[0.0, 1.0, 0.5], (0.0, 1.0)))
                .map_err(CliError::simulation)?;
            checks.push(Check::below("dual residual (p = 1)", max_dual_residual(&pu, &unit, 100), 1e-12, Source::Identity, "unit spring"));
        }
        CaseId::Fulcrum => fulcrum_checks(&mut checks, acc)?,
        CaseId::Cone => cone_checks(&mut checks)?,
        CaseId::CoilDrift => {
            let l = params.l.unwrap_or(10.0);
            if !(l > 0.0) {
                return Err(CliError::Parse(format!("L must be positive, got {l}")));
            }
            used.l = Some(l);
            let cfg = CoilConfig {
                inductance: l,
                coupling: poly(&[1.0, 1.0], (0.0, 1.0)).into(),
                gamma0: 0.0,
            };
            let run = coupled_coils_drift(cfg, poly(&[1.0], (0.0, 1.0)), 0.0, 1.0, &acc.ode).map_err(CliError::simulation)?;
            checks.push(Check::within("max |gamma|", run.max_abs_gamma(1000), 1.0 / l, 1e-12, Source::Derived, "gamma = t/L"));
            checks.push(Check::within("max |residual|", run.max_abs_residual(1000), 1.0, 1e-9, Source::Derived, "L mdot gamma = t"));
        }
        CaseId::Capacitor => {
            let i = oneport_core::devices::variable_capacitor(poly(&[1.0, 1.0], (0.0, 1.0)), poly(&[1.0], (0.0, 1.0)))
                .map_err(CliError::simulation)?;
            checks.push(Check::within("i(0.5)", i.sample(0.5, Side::Right).through, 1.0, 1e-12, Source::Derived, "C = 1+t, v = 1"));
            let x = PiecewiseSignal::constant(0.05, (0.0, 1.0)).map_err(CliError::simulation)?;
            let c = parallel_plate_capacitance(8.854e-12, 3.0, 0.1, 0.1, 1e-3, &x).map_err(CliError::simulation)?;
            checks.push(Check::within(
                "parallel-plate C",
                c.eval(0.5, 0).map_err(CliError::simulation)?,
                1.7708e-10,
                1e-20,
                Source::Derived,
                "eps0 b/d (kappa x + a - x)",
            ));
            oracle_cycle(&mut checks, &mut discrepancies, "ex2-rate-cycle", LawKind::VariableCapacitor, 1, None, acc)?;
        }
        CaseId::Inductor => {
            let v = oneport_core::devices::variable_inductor(poly(&[2.0, -1.0], (0.0, 1.0)), poly(&[0.0, 1.0], (0.0, 1.0)))
                .map_err(CliError::simulation)?;
            checks.push(Check::within("v(0.5)", v.sample(0.5, Side::Right).rate, 1.0, 1e-12, Source::Derived, "L = 2-t, i = t"));
            oracle_cycle(&mut checks, &mut discrepancies, "ex2-cycle", LawKind::VariableInductor, 1, None, acc)?;
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(ReproductionCase {
        id,
        params: used,
        checks,
        discrepancies,
        pass,
    })
}

fn balance_checks(
    checks: &mut Vec<Check>,
    label: &str,
    run: &dyn PortBehaviour,
    force: f64,
    energy: f64,
    acc: &Accuracy,
) -> Result<(), CliError> {
    let f1 = run.sample(1.0, Side::Left).through;
    checks.push(Check::within(&format!("F(1) ({label})"), f1, force, FORCE_TOL, Source::Derived, "closed-form output"));
    let e = terminal_energy(run, 0.0, 1.0, &acc.quadrature).map_err(CliError::simulation)?;
    checks.push(Check::within(&format!("energy ({label})"), e, energy, FORCE_TOL, Source::Derived, "closed-form supplied energy"));
    let sim = SimResult::record(run, 1e-2, &acc.quadrature).map_err(CliError::simulation)?;
    let di = sim.internal_delta().unwrap_or(f64::NAN);
    checks.push(Check::within(&format!("internal delta ({label})"), di, energy, FORCE_TOL, Source::Identity, "dI/dt = F xdot"));
    let res = sim.max_balance_residual().unwrap_or(f64::NAN);
    checks.push(Check::below(&format!("balance residual ({label})"), res, 1e-9, Source::Identity, "running int(F xdot) - dI"));
    Ok(())
}

fn fulcrum_checks(checks: &mut Vec<Check>, acc: &Accuracy) -> Result<(), CliError> {
    let w = (0.0, 1.0);
    let r = poly(&[1.0, 1.0], w);
    let still = fulcrum_trajectory(
        r.clone(),
        poly(&[0.0], w),
        LeverConfig { y0: 1.0, xr0: 1.0, k0: 1.0 },
        &acc.ode,
    )
    .map_err(CliError::simulation)?;
    use oneport_core::mechanism::PivotPath;
    let xr1 = still.pivot(1.0, Side::Left).xr;
    checks.push(Check::within("x_r(1), x = 0", xr1, 2.0 / 3.0, 1e-10, Source::Derived, "x_r = 2 x_r0/(2+t)"));
    let travel = fulcrum_travel_report(&still.sample_xr(1000));
    checks.push(Check::within("fulcrum travel", travel.range, 1.0 / 3.0, 1e-10, Source::Derived, "x_r0 - x_r(1)"));

    let cfg = LeverConfig { y0: 0.5, xr0: 0.1, k0: 3.0 };
    let x = sine(0.0, 0.2, 2.0 * PI, w);
    let run = fulcrum_trajectory(r.clone(), x.clone(), cfg, &acc.ode).map_err(CliError::simulation)?;
    checks.push(Check::below(
        "parallel residual",
        max_parallel_residual(&run, &x, 1000),
        1e-8,
        Source::Identity,
        "y_r xdot_r - ydot_r (x_r + x)",
    ));
    let spring = cfg
        .equivalent_varspring(&Parameter::from(r), 0.0)
        .drive_over(oneport_core::devices::Drive::Position(x.clone()), w, acc)
        .map_err(CliError::simulation)?;
    let m = max_moment_residuals(&spring, &run, 1000);
    checks.push(Check::below("moment residual", m.moment, 1e-7, Source::Identity, "F y_r - k0 x0 (y0 - y_r)"));
    checks.push(Check::below("kinematic residual", m.kinematic, 1e-7, Source::Identity, "x0dot - r xdot"));

    let line = PrescribedPivot {
        xr: poly(&[0.1, 0.5], w),
        yr: poly(&[cfg.y0 / 2.0], w),
    };
    checks.push(Check::above(
        "straight-line pivot residual",
        max_parallel_residual(&line, &x, 1000),
        1e-3,
        Source::Identity,
        "horizontal pivot path does work",
    ));
    Ok(())
}

fn cone_checks(checks: &mut Vec<Check>) -> Result<(), CliError> {
    let g = ConeGeometry {
        r0: 0.01,
        alpha: PI / 8.0,
        length: 0.1,
    };
    let w = (0.0, 1.0);
    let at_zero = cone_ratio(&g, &poly(&[0.0], w)).map_err(CliError::simulation)?;
    let expected = 0.01 / (0.01 + 0.1 * (PI / 8.0).tan());
    checks.push(Check::within("p(s = 0)", at_zero.value(0.5), expected, 1e-15, Source::Derived, "R0/(R0 + S tan(alpha))"));
    checks.push(Check::within("p(S/2)", g.ratio_at(0.05), 1.0, 1e-15, Source::Identity, "equal radii"));
    checks.push(Check::within(
        "p(s) p(S-s)",
        g.ratio_at(0.013) * g.ratio_at(0.1 - 0.013),
        1.0,
        1e-14,
        Source::Identity,
        "opposed-cone reciprocity",
    ));
    let s = sine(0.05, 0.04, 3.0, w);
    let p = cone_ratio(&g, &s).map_err(CliError::simulation)?;
    let law = TwoPortLaw::new(TwoPortKind::MechanicalRotaryTransformer, p);
    let port = ideal_transformer(&law, sine(1.0, 2.0, 5.0, w), poly(&[0.3, -1.0, 0.4], w)).map_err(CliError::simulation)?;
    let worst = (0..=1000)
        .map(|k| port.total_power(k as f64 / 1000.0, Side::Right).abs())
        .fold(0.0, f64::max);
    checks.push(Check::below("total transformer power", worst, 1e-13, Source::Identity, "T1 w1 + T w = 0"));
    Ok(())
}

/// Runs every case concurrently; results come back in id order.
pub fn reproduce_all(params: CaseParams, acc: &Accuracy) -> Vec<(CaseId, Result<ReproductionCase, CliError>)> {
    CaseId::ALL
        .par_iter()
        .map(|&id| (id, reproduce(id, params, acc)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.id().parse::<CaseId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.id()));
        }
        assert!("ex7".parse::<CaseId>().is_err());
    }

    #[test]
    fn every_case_passes_with_defaults() {
        for (id, case) in reproduce_all(CaseParams::default(), &Accuracy::default()) {
            let case = case.unwrap();
            assert!(case.pass, "{id}:\n{case}");
        }
    }

    #[test]
    fn ex2_flags_discrepancy() {
        let case = reproduce(CaseId::Ex2, CaseParams::default(), &Accuracy::default()).unwrap();
        assert_eq!(case.discrepancies.len(), 1);
        assert_eq!(case.discrepancies[0].stated, -1.0);
        assert!((case.discrepancies[0].oracle + 0.5).abs() < 1e-12);
        assert!(case.to_string().contains("DISCREPANCY"));
    }
}
