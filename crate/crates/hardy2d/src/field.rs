//! Two-dimensional magnetic fields: normalized flux, the radial flux
//! function, and decay validation.

use serde::Serialize;

use crate::error::{HardyError, Result};
use crate::grid::RadialGrid;
use crate::quadrature::{adaptive_piecewise, QuadCfg};

/// Threshold below which a profile sample counts as zero when locating the
/// support radius.
const SUPPORT_EPS: f64 = 1e-14;

#[derive(Debug, Clone)]
pub enum FieldKind {
    /// Piecewise-linear samples of a radial profile `b(r)`; zero beyond the
    /// last node, constant extension below the first.
    RadialProfile { radii: Vec<f64>, samples: Vec<f64> },
    /// `b_n(r) = alpha (n+2) r^n` on (0, 1), zero outside.
    PolynomialCutoff { alpha: f64, exponent: u32 },
    /// Cartesian samples of `B` at cell centers; row-major, `values[j*nx+i]`
    /// sits at `origin + ((i+0.5) cell, (j+0.5) cell)`.
    Sampled2D(Sampled2D),
    /// Idealized flux line at the origin, `flux` in (-1, 1).
    AharonovBohm { flux: f64 },
}

#[derive(Debug, Clone)]
pub struct Sampled2D {
    pub values: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub cell: f64,
    pub origin: (f64, f64),
}

#[derive(Debug, Clone)]
pub struct FieldSpec {
    pub kind: FieldKind,
    /// Claimed decay rate `tau` in `|B(x)| = O(|x|^-tau)`; metadata.
    pub decay_exponent: f64,
    /// Claimed local integrability exponent `p > 2`; metadata only, not
    /// testable for closed-form families.
    pub local_integrability: f64,
}

impl FieldSpec {
    pub fn polynomial_cutoff(alpha: f64, exponent: u32) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(HardyError::InvalidField("alpha must be finite".into()));
        }
        Ok(Self { kind: FieldKind::PolynomialCutoff { alpha, exponent }, ..Self::defaults() })
    }

    pub fn radial_profile(radii: Vec<f64>, samples: Vec<f64>) -> Result<Self> {
        if radii.len() != samples.len() || radii.len() < 2 {
            return Err(HardyError::InvalidField(
                "profile needs matching radii/samples with at least 2 nodes".into(),
            ));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(HardyError::InvalidField(
                "profile radii must be nonnegative and strictly increasing".into(),
            ));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(HardyError::InvalidField("profile samples must be finite".into()));
        }
        if *radii.last().unwrap() <= 0.0 {
            return Err(HardyError::InvalidField("support radius must be positive".into()));
        }
        Ok(Self { kind: FieldKind::RadialProfile { radii, samples }, ..Self::defaults() })
    }

    /// Uniform field on the unit disc scaled to `b`, a handy closed-form
    /// test profile (flux `b/2`).
    pub fn uniform_disc(b: f64) -> Result<Self> {
        Self::radial_profile(vec![0.0, 1.0 - 1e-12, 1.0], vec![b, b, 0.0])
    }

    pub fn zero() -> Self {
        Self {
            kind: FieldKind::RadialProfile { radii: vec![0.0, 1.0], samples: vec![0.0, 0.0] },
            ..Self::defaults()
        }
    }

    pub fn aharonov_bohm(flux: f64) -> Result<Self> {
        if !(flux > -1.0 && flux < 1.0) {
            return Err(HardyError::InvalidField(format!(
                "Aharonov-Bohm flux must lie in (-1, 1), got {flux}"
            )));
        }
        Ok(Self { kind: FieldKind::AharonovBohm { flux }, ..Self::defaults() })
    }

    pub fn sampled2d(s: Sampled2D) -> Result<Self> {
        if s.values.len() != s.nx * s.ny || s.nx == 0 || s.ny == 0 {
            return Err(HardyError::InvalidField("sampled grid shape mismatch".into()));
        }
        if s.cell <= 0.0 || !s.cell.is_finite() {
            return Err(HardyError::InvalidField("cell size must be positive".into()));
        }
        if s.values.iter().any(|v| !v.is_finite()) {
            return Err(HardyError::InvalidField("sampled values must be finite".into()));
        }
        Ok(Self { kind: FieldKind::Sampled2D(s), ..Self::defaults() })
    }

    fn defaults() -> Self {
        Self {
            kind: FieldKind::AharonovBohm { flux: 0.0 },
            decay_exponent: 4.0,
            local_integrability: 3.0,
        }
    }

    pub fn with_decay(mut self, tau: f64, p: f64) -> Result<Self> {
        if !(tau > 2.0) || !(p > 2.0) {
            return Err(HardyError::InvalidField(
                "decay exponent and integrability exponent must exceed 2".into(),
            ));
        }
        self.decay_exponent = tau;
        self.local_integrability = p;
        Ok(self)
    }

    pub fn is_radial(&self) -> bool {
        matches!(
            self.kind,
            FieldKind::RadialProfile { .. } | FieldKind::PolynomialCutoff { .. }
        )
    }

    /// Radius beyond which the (radial) field vanishes.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.kind {
            FieldKind::PolynomialCutoff { .. } => Some(1.0),
            FieldKind::RadialProfile { radii, samples } => {
                let mut j = samples.len();
                while j > 0 && samples[j - 1].abs() < SUPPORT_EPS {
                    j -= 1;
                }
                if j == samples.len() {
                    Some(*radii.last().unwrap())
                } else if j == 0 {
                    Some(radii[0].max(f64::MIN_POSITIVE))
                } else {
                    Some(radii[j])
                }
            }
            _ => None,
        }
    }

    /// Pointwise radial profile value.
    pub fn b_radial(&self, r: f64) -> Result<f64> {
        match &self.kind {
            FieldKind::PolynomialCutoff { alpha, exponent } => {
                if r > 0.0 && r < 1.0 {
                    Ok(alpha * (*exponent as f64 + 2.0) * r.powi(*exponent as i32))
                } else {
                    Ok(0.0)
                }
            }
            FieldKind::RadialProfile { radii, samples } => Ok(profile_at(radii, samples, r)),
            _ => Err(HardyError::NonRadialField("pointwise b(r) needs a radial field".into())),
        }
    }

    /// Integration breakpoints of the radial profile (kinks).
    pub(crate) fn radial_breakpoints(&self) -> Result<Vec<f64>> {
        match &self.kind {
            FieldKind::PolynomialCutoff { .. } => Ok(vec![1.0]),
            FieldKind::RadialProfile { radii, .. } => Ok(radii.clone()),
            _ => Err(HardyError::NonRadialField("breakpoints need a radial field".into())),
        }
    }

    /// `Φ(r) = ∫_0^r b(t) t dt`, exact beyond the support radius.
    pub fn cumulative_flux(&self, r: f64) -> Result<f64> {
        match &self.kind {
            FieldKind::PolynomialCutoff { alpha, exponent } => {
                let rc = r.clamp(0.0, 1.0);
                Ok(alpha * rc.powi(*exponent as i32 + 2))
            }
            FieldKind::RadialProfile { .. } => {
                let support = self.support_radius().unwrap();
                if r >= support {
                    return compute_flux(self);
                }
                let pts = self.radial_breakpoints()?;
                let cfg = QuadCfg::default();
                adaptive_piecewise(&|t| self.b_radial(t).unwrap_or(0.0) * t, 0.0, r, &pts, &cfg)
            }
            _ => Err(HardyError::NonRadialField("cumulative flux needs a radial field".into())),
        }
    }

    pub fn is_nonnegative_radial(&self) -> Result<bool> {
        match &self.kind {
            FieldKind::PolynomialCutoff { alpha, .. } => Ok(*alpha >= 0.0),
            FieldKind::RadialProfile { samples, .. } => {
                Ok(samples.iter().all(|&s| s >= -SUPPORT_EPS))
            }
            _ => Err(HardyError::NonRadialField("sign check needs a radial field".into())),
        }
    }
}

fn profile_at(radii: &[f64], samples: &[f64], r: f64) -> f64 {
    if r <= radii[0] {
        return samples[0];
    }
    let last = radii.len() - 1;
    if r >= radii[last] {
        return if r == radii[last] { samples[last] } else { 0.0 };
    }
    let i = match radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
        Ok(i) => return samples[i],
        Err(i) => i - 1,
    };
    let t = (r - radii[i]) / (radii[i + 1] - radii[i]);
    samples[i] * (1.0 - t) + samples[i + 1] * t
}

/// Radial flux function `Φ` evaluated on a grid.
#[derive(Debug, Clone)]
pub struct FluxFunction {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub total_flux: f64,
}

impl FluxFunction {
    /// Linear interpolation between nodes; exact `total_flux` beyond the grid.
    pub fn at(&self, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        match self.grid.floor_index(r) {
            None => self.values[0] * (r / nodes[0]).powi(2),
            Some(i) if i + 1 == nodes.len() => self.total_flux,
            Some(i) => {
                let t = (r - nodes[i]) / (nodes[i + 1] - nodes[i]);
                self.values[i] * (1.0 - t) + self.values[i + 1] * t
            }
        }
    }
}

/// Normalized total flux `α = (1/2π) ∫ B dx`.
pub fn compute_flux(field: &FieldSpec) -> Result<f64> {
    match &field.kind {
        FieldKind::AharonovBohm { flux } => Ok(*flux),
        FieldKind::PolynomialCutoff { alpha, .. } => Ok(*alpha),
        FieldKind::RadialProfile { .. } => {
            let support = field.support_radius().unwrap();
            let pts = field.radial_breakpoints()?;
            let cfg = QuadCfg::default();
            adaptive_piecewise(&|t| field.b_radial(t).unwrap_or(0.0) * t, 0.0, support, &pts, &cfg)
        }
        FieldKind::Sampled2D(s) => {
            let sum: f64 = s.values.iter().sum();
            Ok(sum * s.cell * s.cell / (2.0 * std::f64::consts::PI))
        }
    }
}

/// Cumulative flux on every grid node; exact total beyond the support.
pub fn flux_function(field: &FieldSpec, grid: &RadialGrid) -> Result<FluxFunction> {
    if !field.is_radial() {
        return Err(HardyError::NonRadialField(
            "flux function is defined for radial fields only".into(),
        ));
    }
    let support = field.support_radius().unwrap();
    let total = compute_flux(field)?;
    let pts = field.radial_breakpoints()?;
    let cfg = QuadCfg::default();
    let nodes = grid.nodes();
    let mut values = Vec::with_capacity(nodes.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &r in nodes {
        if r >= support {
            values.push(total);
            prev = r;
            continue;
        }
        acc += adaptive_piecewise(&|t| field.b_radial(t).unwrap_or(0.0) * t, prev, r, &pts, &cfg)?;
        values.push(acc);
        prev = r;
    }
    Ok(FluxFunction { grid: grid.clone(), values, total_flux: total })
}

/// Result of checking the claimed decay rate against sampled data.
#[derive(Debug, Clone, Serialize)]
pub struct DecayReport {
    pub claimed_tau: f64,
    pub fitted_slope: Option<f64>,
    pub pass: bool,
    pub detail: String,
}

/// Report-only check of `|B(x)| = O(|x|^-tau)`.
///
/// Compactly supported fields pass trivially. Sampled fields are binned into
/// radial shells over the outer region and the log-log slope of the shell
/// means is compared against `-tau` with 5% slack (faster decay passes).
pub fn validate_decay(field: &FieldSpec) -> DecayReport {
    let tau = field.decay_exponent;
    match &field.kind {
        FieldKind::PolynomialCutoff { .. } | FieldKind::RadialProfile { .. } => DecayReport {
            claimed_tau: tau,
            fitted_slope: None,
            pass: true,
            detail: "compact support".into(),
        },
        FieldKind::AharonovBohm { .. } => DecayReport {
            claimed_tau: tau,
            fitted_slope: None,
            pass: true,
            detail: "flux line, no 2-D density".into(),
        },
        FieldKind::Sampled2D(s) => {
            let (slope, n_shells) = tail_slope(s);
            match slope {
                None => DecayReport {
                    claimed_tau: tau,
                    fitted_slope: None,
                    pass: false,
                    detail: "not enough tail data to fit".into(),
                },
                Some(sl) => {
                    let pass = sl <= -tau * 0.95;
                    DecayReport {
                        claimed_tau: tau,
                        fitted_slope: Some(sl),
                        pass,
                        detail: format!("fit over {n_shells} shells"),
                    }
                }
            }
        }
    }
}

fn tail_slope(s: &Sampled2D) -> (Option<f64>, usize) {
    let half_w = 0.5 * s.cell * s.nx as f64;
    let half_h = 0.5 * s.cell * s.ny as f64;
    let cx = s.origin.0 + half_w;
    let cy = s.origin.1 + half_h;
    let r_max = half_w.min(half_h);
    let r_lo = 0.3 * r_max;
    let r_hi = 0.95 * r_max;
    let n_shells = 12usize;
    let mut sums = vec![0.0f64; n_shells];
    let mut counts = vec![0usize; n_shells];
    for j in 0..s.ny {
        for i in 0..s.nx {
            let x = s.origin.0 + (i as f64 + 0.5) * s.cell - cx;
            let y = s.origin.1 + (j as f64 + 0.5) * s.cell - cy;
            let r = x.hypot(y);
            if r < r_lo || r > r_hi {
                continue;
            }
            let k = (((r / r_lo).ln() / (r_hi / r_lo).ln()) * n_shells as f64) as usize;
            let k = k.min(n_shells - 1);
            sums[k] += s.values[j * s.nx + i].abs();
            counts[k] += 1;
        }
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..n_shells {
        if counts[k] == 0 {
            continue;
        }
        let mean = sums[k] / counts[k] as f64;
        if mean <= 0.0 {
            continue;
        }
        let r_mid = r_lo * ((k as f64 + 0.5) / n_shells as f64 * (r_hi / r_lo).ln()).exp();
        xs.push(r_mid.ln());
        ys.push(mean.ln());
    }
    if xs.len() < 3 {
        return (None, xs.len());
    }
    (Some(lsq_slope(&xs, &ys)), xs.len())
}

pub(crate) fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_cutoff_flux_is_alpha_for_every_exponent() {
        for n in [0u32, 1, 3, 8, 32] {
            let f = FieldSpec::polynomial_cutoff(0.4, n).unwrap();
            assert_abs_diff_eq!(compute_flux(&f).unwrap(), 0.4, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_field_flux() {
        assert_abs_diff_eq!(compute_flux(&FieldSpec::zero()).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn uniform_disc_flux_is_half() {
        // ∫_0^1 t dt = 1/2, up to the 1e-12 closing ramp of the profile
        let f = FieldSpec::uniform_disc(1.0).unwrap();
        assert_abs_diff_eq!(compute_flux(&f).unwrap(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn flux_function_of_polynomial_cutoff() {
        let f = FieldSpec::polynomial_cutoff(0.4, 0).unwrap();
        let grid = RadialGrid::log_spaced(1e-3, 1e2, 256).unwrap();
        let phi = flux_function(&f, &grid).unwrap();
        for (&r, &v) in grid.nodes().iter().zip(&phi.values) {
            let exact = if r < 1.0 { 0.4 * r * r } else { 0.4 };
            assert_abs_diff_eq!(v, exact, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(phi.total_flux, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn uniform_disc_cumulative_flux_at_half() {
        let f = FieldSpec::uniform_disc(1.0).unwrap();
        assert_abs_diff_eq!(f.cumulative_flux(0.5).unwrap(), 0.125, epsilon = 1e-10);
    }

    #[test]
    fn flux_function_rejects_non_radial() {
        let f = FieldSpec::aharonov_bohm(0.5).unwrap();
        let grid = RadialGrid::default();
        assert!(matches!(flux_function(&f, &grid), Err(HardyError::NonRadialField(_))));
    }

    #[test]
    fn flux_function_final_value_matches_total() {
        let f = FieldSpec::polynomial_cutoff(0.7, 3).unwrap();
        let grid = RadialGrid::log_spaced(1e-4, 1e4, 512).unwrap();
        let phi = flux_function(&f, &grid).unwrap();
        let total = compute_flux(&f).unwrap();
        assert!((phi.values.last().unwrap() - total).abs() <= 1e-8 * total.abs());
    }

    #[test]
    fn decay_passes_for_compact_support() {
        let f = FieldSpec::polynomial_cutoff(0.4, 2).unwrap();
        assert!(validate_decay(&f).pass);
    }

    fn sampled_radial<F: Fn(f64) -> f64>(b: F, half: f64, n: usize) -> FieldSpec {
        let cell = 2.0 * half / n as f64;
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let x = -half + (i as f64 + 0.5) * cell;
                let y = -half + (j as f64 + 0.5) * cell;
                values.push(b(x.hypot(y)));
            }
        }
        FieldSpec::sampled2d(Sampled2D { values, nx: n, ny: n, cell, origin: (-half, -half) })
            .unwrap()
    }

    #[test]
    fn decay_fit_accepts_true_quartic_tail() {
        let f = sampled_radial(|r| (1.0 + r * r).powi(-2), 20.0, 160)
            .with_decay(4.0, 3.0)
            .unwrap();
        let rep = validate_decay(&f);
        let slope = rep.fitted_slope.unwrap();
        assert!(rep.pass, "slope {slope}");
        assert!((slope + 4.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn decay_fit_rejects_slow_tail() {
        let f = sampled_radial(|r| (1.0 + r).powi(-1), 20.0, 160)
            .with_decay(3.0, 3.0)
            .unwrap();
        let rep = validate_decay(&f);
        assert!(!rep.pass);
        assert!((rep.fitted_slope.unwrap() + 1.0).abs() < 0.2);
    }

    #[test]
    fn ab_flux_validation() {
        assert!(FieldSpec::aharonov_bohm(1.0).is_err());
        assert!(FieldSpec::aharonov_bohm(-0.99).is_ok());
    }

    #[test]
    fn support_radius_detection() {
        let f = FieldSpec::radial_profile(
            vec![0.0, 0.5, 1.0, 2.0, 3.0],
            vec![1.0, 1.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        assert_abs_diff_eq!(f.support_radius().unwrap(), 1.0, epsilon = 0.0);
    }

    #[test]
    fn flux_scaling_linearity() {
        let radii = vec![0.0, 0.3, 0.7, 1.0];
        let a = vec![0.2, 1.1, 0.4, 0.0];
        let b = vec![0.5, 0.3, 0.9, 0.0];
        let fa = FieldSpec::radial_profile(radii.clone(), a.clone()).unwrap();
        let fb = FieldSpec::radial_profile(radii.clone(), b.clone()).unwrap();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let fs = FieldSpec::radial_profile(radii.clone(), sum).unwrap();
        let lhs = compute_flux(&fs).unwrap();
        let rhs = compute_flux(&fa).unwrap() + compute_flux(&fb).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);

        let scaled: Vec<f64> = a.iter().map(|x| 3.5 * x).collect();
        let fc = FieldSpec::radial_profile(radii, scaled).unwrap();
        assert_abs_diff_eq!(
            compute_flux(&fc).unwrap(),
            3.5 * compute_flux(&fa).unwrap(),
            epsilon = 1e-10
        );
    }
}
