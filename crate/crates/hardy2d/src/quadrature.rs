//! Adaptive Gauss–Legendre quadrature on dyadic subintervals.
//!
//! One engine serves every module: flux and superpotential integrals,
//! Muckenhoupt cumulative integrals, and test-sequence energies. The
//! integrands are smooth between declared breakpoints, with at worst
//! integrable endpoint singularities (`t^p log t`, `p > -1`), which dyadic
//! bisection resolves geometrically.

use crate::error::{HardyError, Result};

/// 15-point Gauss–Legendre nodes on [-1, 1] (positive half; rule is symmetric).
const GL15_NODES: [f64; 8] = [
    0.0,
    0.201_194_093_997_434_5,
    0.394_151_347_077_563_4,
    0.570_972_172_608_538_8,
    0.724_417_731_360_170_0,
    0.848_206_583_410_427_2,
    0.937_273_392_400_705_9,
    0.987_992_518_020_485_4,
];
const GL15_WEIGHTS: [f64; 8] = [
    0.202_578_241_925_561_3,
    0.198_431_485_327_111_6,
    0.186_161_000_015_562_2,
    0.166_269_205_816_993_9,
    0.139_570_677_926_154_3,
    0.107_159_220_467_171_9,
    0.070_366_047_488_108_1,
    0.030_753_241_996_117_3,
];

/// Fixed 4-point Gauss–Legendre rule, used per finite element.
const GL4_NODES: [f64; 2] = [0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 2] = [0.652_145_154_862_546_2, 0.347_854_845_137_453_85];

pub fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = GL15_WEIGHTS[0] * f(c);
    for i in 1..8 {
        let dx = h * GL15_NODES[i];
        acc += GL15_WEIGHTS[i] * (f(c + dx) + f(c - dx));
    }
    acc * h
}

pub fn gl4<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..2 {
        let dx = h * GL4_NODES[i];
        acc += GL4_WEIGHTS[i] * (f(c + dx) + f(c - dx));
    }
    acc * h
}

#[derive(Debug, Clone, Copy)]
pub struct QuadCfg {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadCfg {
    fn default() -> Self {
        // Absolute 1e-10 matches the field-module contract; the relative
        // floor keeps widely scaled integrands (t^{2m-1} over nine decades)
        // meaningful.
        Self { abs_tol: 1e-10, rel_tol: 1e-12, max_depth: 48 }
    }
}

impl QuadCfg {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }
}

/// Adaptive bisection: accept a panel when GL15 on it agrees with the sum of
/// GL15 on its halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadCfg) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(HardyError::NonIntegrableField(format!(
            "bad integration interval [{a}, {b}]"
        )));
    }
    let whole = gl15(f, a, b);
    if !whole.is_finite() {
        return Err(HardyError::NonIntegrableField(
            "integrand not finite at quadrature nodes".into(),
        ));
    }
    let mut acc = Acc { sum: 0.0, worst: 0.0 };
    recurse(f, a, b, whole, cfg, 0, &mut acc)?;
    Ok(acc.sum)
}

struct Acc {
    sum: f64,
    worst: f64,
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    cfg: &QuadCfg,
    depth: u32,
    acc: &mut Acc,
) -> Result<()> {
    let mid = 0.5 * (a + b);
    let left = gl15(f, a, mid);
    let right = gl15(f, mid, b);
    if !(left.is_finite() && right.is_finite()) {
        return Err(HardyError::NonIntegrableField(
            "integrand not finite at quadrature nodes".into(),
        ));
    }
    let two = left + right;
    let err = (two - whole).abs();
    let scale = acc.sum.abs().max(two.abs());
    if err <= cfg.abs_tol.max(cfg.rel_tol * scale) || mid <= a || mid >= b {
        acc.sum += two;
        acc.worst = acc.worst.max(err);
        return Ok(());
    }
    if depth >= cfg.max_depth {
        // Endpoint singularity not resolved to tolerance; fail only if the
        // leftover panel still matters.
        if err > 1e-6 * scale.max(1.0) {
            return Err(HardyError::NonIntegrableField(format!(
                "quadrature stalled on [{a:.6e}, {b:.6e}] (err {err:.3e})"
            )));
        }
        acc.sum += two;
        return Ok(());
    }
    recurse(f, a, mid, left, cfg, depth + 1, acc)?;
    recurse(f, mid, b, right, cfg, depth + 1, acc)
}

/// Integrate with forced splits at the interior `breakpoints` (kinks of
/// piecewise integrands).
pub fn adaptive_piecewise<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadCfg,
) -> Result<f64> {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut lo = a;
    let mut total = 0.0;
    for c in cuts {
        total += adaptive(f, lo, c, cfg)?;
        lo = c;
    }
    total += adaptive(f, lo, b, cfg)?;
    Ok(total)
}

/// Fixed 4-point rule accumulated over [a, b]; exact for cubics.
pub fn element_gl4<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    gl4(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_exact() {
        let cfg = QuadCfg::default();
        let v = adaptive(&|x: f64| x * x * x, 0.0, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn log_singularity_converges() {
        // ∫_0^1 t ln t dt = -1/4
        let cfg = QuadCfg::default();
        let v = adaptive(&|t: f64| t * t.ln(), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(v, -0.25, epsilon = 1e-11);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        // ∫_0^1 t^{-1/2} dt = 2
        let cfg = QuadCfg::default();
        let v = adaptive(&|t: f64| t.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn piecewise_splits_at_kink() {
        let cfg = QuadCfg::default();
        let f = |t: f64| if t < 1.0 { 1.0 } else { 0.0 };
        let v = adaptive_piecewise(&f, 0.0, 2.0, &[1.0], &cfg).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn wide_range_relative_accuracy() {
        // ∫_{1e-9}^{1} t^{-3} dt = (1e18 - 1)/2
        let cfg = QuadCfg { abs_tol: 0.0, rel_tol: 1e-12, max_depth: 60 };
        let v = adaptive(&|t: f64| t.powi(-3), 1e-9, 1.0, &cfg).unwrap();
        let exact = (1e18 - 1.0) / 2.0;
        assert!((v - exact).abs() <= 1e-9 * exact);
    }

    #[test]
    fn rejects_non_finite_integrand() {
        let cfg = QuadCfg::default();
        assert!(adaptive(&|t: f64| 1.0 / (t - 0.5), 0.0, 1.0, &cfg).is_err());
    }
}
