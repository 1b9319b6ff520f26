/// Locations in `(a, b)` where `f` changes sign, found by scanning `samples`
/// equal subintervals and bisecting each bracket to machine resolution.
///
/// Stretches where `f` is exactly zero are skipped; a sign change across
/// such a stretch is reported once, inside the bracketing samples.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let inset = h * 1e-9;
    let mut roots = vec![];
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=n {
        let t = match i {
            0 => a + inset,
            i if i == n => b - inset,
            i => a + i as f64 * h,
        };
        let v = f(t);
        if v == 0.0 {
            continue;
        }
        if let Some((lt, lv)) = last {
            if lv * v < 0.0 {
                roots.push(bisect(&f, lt, lv, t));
            }
        }
        last = Some((t, v));
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut flo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cosine_zeros() {
        let roots = sign_changes(|t| (2.0 * PI * t).cos(), 0.0, 2.0, 64);
        let want = [0.25, 0.75, 1.25, 1.75];
        assert_eq!(roots.len(), 4);
        for (r, w) in roots.iter().zip(want) {
            assert!((r - w).abs() < 1e-14, "{r}");
        }
    }

    #[test]
    fn flat_functions_have_no_crossings() {
        assert!(sign_changes(|_| 1.0, 0.0, 1.0, 16).is_empty());
        assert!(sign_changes(|_| 0.0, 0.0, 1.0, 16).is_empty());
        let r = sign_changes(|t: f64| if t < 0.5 { -1.0 } else { 1.0 }, 0.0, 1.0, 7);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-14);
    }
}
