//! Scalar search helpers: golden-section refinement, grid-seeded minimization
//! and bisection.

use crate::error::{GaitError, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)`; stops once the bracket is narrower than `tol`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum of `f` on `[a, b]`: a uniform grid of `n` samples, then golden
/// refinement around the best `keep` grid points. Endpoints are always
/// candidates.
pub fn scan_minimize<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, keep: usize) -> (f64, f64) {
    if b <= a {
        let v = f(a);
        return (a, v);
    }
    let n = n.max(3);
    let h = (b - a) / (n - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = if i == n - 1 { b } else { a + h * i as f64 };
            (x, f(x))
        })
        .collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| grid[i].1.total_cmp(&grid[j].1));

    let mut best = grid[order[0]];
    for &i in order.iter().take(keep.max(1)) {
        let lo = grid[i.saturating_sub(1)].0;
        let hi = grid[(i + 1).min(n - 1)].0;
        let tol = 1e-12 * (b - a).abs().max(1e-300);
        let (x, v) = golden_section_min(&mut f, lo, hi, tol);
        if v < best.1 {
            best = (x, v);
        }
    }
    best
}

/// Maximum counterpart of [`scan_minimize`].
pub fn scan_maximize<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, keep: usize) -> (f64, f64) {
    let (x, v) = scan_minimize(|x| -f(x), a, b, n, keep);
    (x, -v)
}

/// Bisection for a sign change of `f` on `[a, b]`, stopping once the bracket
/// is narrower than `tol` or `f` hits zero exactly. Returns the endpoint with
/// the smaller residual.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(GaitError::NoConvergence(format!(
            "no sign change on [{a}, {b}] ({fa}, {fb})"
        )));
    }
    let mut fb = fb;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scan_handles_multimodal_functions() {
        let f = |x: f64| (5.0 * x).sin() + 0.1 * x;
        let (x, v) = scan_minimize(f, 0.0, 6.0, 256, 3);
        let brute = (0..600_001)
            .map(|i| f(i as f64 * 1e-5))
            .fold(f64::INFINITY, f64::min);
        assert!(v <= brute + 1e-12);
        assert!((f(x) - v).abs() < 1e-15);
    }

    #[test]
    fn scan_keeps_endpoints() {
        let (x, v) = scan_minimize(|x| x, 1.0, 2.0, 16, 3);
        assert_eq!((x, v), (1.0, 1.0));
        let (x, _) = scan_maximize(|x| x, 1.0, 2.0, 16, 3);
        assert_eq!(x, 2.0);
    }

    #[test]
    fn bisection() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }
}
