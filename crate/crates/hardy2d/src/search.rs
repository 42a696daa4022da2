//! Scalar extremum search: coarse grid scan plus golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization on [a, b]; the objective is assumed unimodal
/// on the bracket. Returns (argmax, max).
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, xtol_rel: f64) -> (f64, f64) {
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= xtol_rel * (lo.abs() + hi.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub fn golden_min<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, xtol_rel: f64) -> (f64, f64) {
    let (x, v) = golden_max(&|t| -f(t), a, b, xtol_rel);
    (x, -v)
}

/// Evaluate `f` on `xs` (assumed sorted), bracket the best sample, refine.
/// Boundary maxima refine against the single neighboring sample.
pub fn scan_refine_max<F: Fn(f64) -> f64>(xs: &[f64], f: &F, xtol_rel: f64) -> (f64, f64) {
    assert!(!xs.is_empty());
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let lo = if best == 0 { xs[0] } else { xs[best - 1] };
    let hi = if best + 1 == xs.len() { xs[best] } else { xs[best + 1] };
    let (x, v) = golden_max(f, lo, hi, xtol_rel);
    if v >= vals[best] {
        (x, v)
    } else {
        (xs[best], vals[best])
    }
}

pub fn scan_refine_min<F: Fn(f64) -> f64>(xs: &[f64], f: &F, xtol_rel: f64) -> (f64, f64) {
    let (x, v) = scan_refine_max(xs, &|t| -f(t), xtol_rel);
    (x, -v)
}

/// Geometric sequence of `n` points from `a` to `b` (inclusive).
pub fn log_points(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let q = (b / a).ln();
    (0..n).map(|i| a * (q * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn finds_parabola_peak() {
        let f = |x: f64| -(x - 2.5) * (x - 2.5);
        let (x, v) = golden_max(&f, 0.0, 10.0, 1e-12);
        assert_abs_diff_eq!(x, 2.5, epsilon = 1e-9);
        assert!(v <= 0.0 && v > -1e-18);
    }

    #[test]
    fn scan_handles_boundary_max() {
        let xs = log_points(1.0, 100.0, 16);
        let f = |x: f64| -x; // max at left boundary
        let (x, _) = scan_refine_max(&xs, &f, 1e-10);
        assert!(x <= xs[1]);
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn log_points_endpoints() {
        let p = log_points(0.5, 32.0, 7);
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[6], 32.0, epsilon = 1e-12);
    }
}
