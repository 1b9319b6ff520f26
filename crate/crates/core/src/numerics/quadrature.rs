use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{piece_grid, NumericsError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any initial panel.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(NumericsError::InvalidSpec("quadrature tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_PANELS: usize = 200_000;

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: f64,
    error: f64,
    /// Roundoff part of `error`; bisection cannot reduce it.
    floor: f64,
}

impl Panel {
    fn new(a: f64, b: f64, depth: u32, est: Estimate) -> Self {
        Panel {
            a,
            b,
            depth,
            value: est.value,
            error: est.error,
            floor: est.floor,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn roundoff_floor(res_abs: f64) -> f64 {
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        50.0 * f64::EPSILON * res_abs
    } else {
        0.0
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    scaled.max(roundoff_floor(res_abs))
}

struct Estimate {
    value: f64,
    error: f64,
    floor: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Estimate, NumericsError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |t: f64| {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFinite(t))
        }
    };
    let fc = eval(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    Ok(Estimate {
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h),
        floor: roundoff_floor(res_abs * h),
    })
}

/// Adaptive Gauss–Kronrod integration of `f` over `[t0, t1]`.
///
/// Initial panels are cut at every breakpoint inside the interval and no
/// panel ever straddles one. The worst panel is bisected until the summed
/// error estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Quadrature, NumericsError> {
    spec.validate()?;
    if !(t0.is_finite() && t1.is_finite()) || t0 > t1 {
        return Err(NumericsError::InvalidInterval(t0, t1));
    }
    if t0 == t1 {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let grid = piece_grid(t0, t1, breakpoints);
    let mut heap = BinaryHeap::with_capacity(grid.len() * 4);
    for w in grid.windows(2) {
        let est = gk15(&f, w[0], w[1])?;
        heap.push(Panel::new(w[0], w[1], 0, est));
    }
    // the roundoff floor is excluded from the tolerance test
    let converged = |t: &Totals| t.error - t.floor <= spec.abs_tol.max(spec.rel_tol * t.value.abs());
    let mut running = totals(&heap);
    loop {
        if converged(&running) {
            // running sums drift; confirm with an ordered sum before accepting
            running = totals(&heap);
            if converged(&running) {
                return Ok(Quadrature {
                    value: running.value,
                    error: running.error,
                    panels: heap.len(),
                });
            }
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= spec.max_depth || heap.len() >= MAX_PANELS || mid <= worst.a || mid >= worst.b
        {
            heap.push(worst);
            let t = totals(&heap);
            return Err(NumericsError::NoConvergence {
                estimate: t.value,
                error: t.error,
            });
        }
        running.value -= worst.value;
        running.error -= worst.error;
        running.floor -= worst.floor;
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let est = gk15(&f, a, b)?;
            running.value += est.value;
            running.error += est.error;
            running.floor += est.floor;
            heap.push(Panel::new(a, b, worst.depth + 1, est));
        }
    }
}

struct Totals {
    value: f64,
    error: f64,
    floor: f64,
}

/// Sum over panels in positional order so the result is independent of heap
/// layout.
fn totals(heap: &BinaryHeap<Panel>) -> Totals {
    let mut parts: Vec<&Panel> = heap.iter().collect();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    parts.iter().fold(
        Totals {
            value: 0.0,
            error: 0.0,
            floor: 0.0,
        },
        |t, p| Totals {
            value: t.value + p.value,
            error: t.error + p.error,
            floor: t.floor + p.floor,
        },
    )
}

/// Composite Simpson rule with `panels_per_piece` (rounded up to even) equal
/// panels between consecutive breakpoints.
///
/// Non-adaptive and independent of [`integrate`]; exact for piecewise cubics
/// aligned with the breakpoints. Used as a brute-force reference.
pub fn composite_simpson<F: Fn(f64) -> f64>(
    f: F,
    t0: f64,
    t1: f64,
    breakpoints: &[f64],
    panels_per_piece: usize,
) -> f64 {
    let n = (panels_per_piece.max(2) + 1) & !1;
    let grid = piece_grid(t0, t1, breakpoints);
    let mut total = 0.0;
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / n as f64;
        // endpoints are sampled just inside the piece to respect one-sided limits
        let eps = h * 1e-9;
        let mut s = f(a + eps) + f(b - eps);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        total += s * h / 3.0;
    }
    total
}
