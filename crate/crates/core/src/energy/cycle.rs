use serde::{Deserialize, Serialize};

use crate::signals::{Observable, Side};

/// Highest derivative order compared at cycle endpoints.
pub const MAX_CYCLE_ORDER: u32 = 2;

/// Endpoint comparison of one derivative of one quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleEntry {
    pub quantity: String,
    pub order: u32,
    pub at_start: Option<f64>,
    pub at_end: Option<f64>,
    pub mismatch: Option<f64>,
    /// False when the quantity does not provide this derivative order.
    pub checked: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub t0: f64,
    pub t1: f64,
    /// Derivative order compared, after capping at [`MAX_CYCLE_ORDER`].
    pub order: u32,
    pub requested_order: u32,
    pub tol: f64,
    pub entries: Vec<CycleEntry>,
    pub pass: bool,
}

impl CycleReport {
    /// Pass flag over every checked entry of one quantity.
    pub fn quantity_pass(&self, quantity: &str) -> bool {
        self.entries
            .iter()
            .filter(|e| e.quantity == quantity && e.checked)
            .all(|e| e.pass)
    }

    pub fn max_mismatch(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.mismatch)
            .fold(0.0, f64::max)
    }

    pub fn unchecked(&self) -> usize {
        self.entries.iter().filter(|e| !e.checked).count()
    }
}

/// Compares each quantity and its derivatives at the two ends of `[t0, t1]`.
///
/// The right limit is used at the earlier instant and the left limit at the
/// later one, so the report does not depend on argument order.
pub fn check_cycle_conditions(
    quantities: &[(&str, &dyn Observable)],
    t0: f64,
    t1: f64,
    order: u32,
    tol: f64,
) -> CycleReport {
    let capped = order.min(MAX_CYCLE_ORDER);
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    let mut entries = vec![];
    for (label, q) in quantities {
        for k in 0..=capped {
            let a = q.derivative(lo, k, Side::Right);
            let b = q.derivative(hi, k, Side::Left);
            let mismatch = a.zip(b).map(|(a, b)| (a - b).abs());
            entries.push(CycleEntry {
                quantity: label.to_string(),
                order: k,
                at_start: a,
                at_end: b,
                mismatch,
                checked: mismatch.is_some(),
                pass: mismatch.is_none_or(|m| m <= tol),
            });
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    CycleReport {
        t0,
        t1,
        order: capped,
        requested_order: order,
        tol,
        entries,
        pass,
    }
}
