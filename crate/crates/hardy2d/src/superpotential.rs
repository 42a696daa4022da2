//! The superpotential `h` (Newton logarithmic potential of the field), its
//! radial closed form, the comparison profiles `g±`, and the constants
//! `k±(ρ)`, `K±(ρ)`, `β±(B;ρ)`, `λ(R)`.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use crate::error::{HardyError, Result};
use crate::field::{compute_flux, FieldKind, FieldSpec, Sampled2D};
use crate::grid::RadialGrid;
use crate::quadrature::{adaptive_piecewise, QuadCfg};
use crate::search::{scan_refine_max, scan_refine_min};

fn quad_cfg() -> QuadCfg {
    QuadCfg { abs_tol: 1e-13, rel_tol: 1e-13, max_depth: 52 }
}

/// Tail behaviour of a superpotential table beyond `tail_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailKind {
    /// `h(r) = -alpha ln r` exactly (radial compactly supported field).
    ExactLog,
    /// `e^h r^alpha = 1 + O(1/r)` with envelope constant `c`.
    Asymptotic { c: f64 },
}

/// Radial samples of `h` with tail metadata. When built from a radial field
/// the table keeps the cumulative integrals, so `h_at` is quadrature-exact
/// at arbitrary radii (not just nodes); imported tables fall back to
/// interpolation in `ln r`.
#[derive(Debug, Clone)]
pub struct SuperpotentialTable {
    pub grid: RadialGrid,
    pub h: Vec<f64>,
    pub alpha: f64,
    pub tail_start: f64,
    /// Coefficient of `ln r` in the tail; equals `-alpha`.
    pub tail_exponent: f64,
    pub tail: TailKind,
    source: Option<RadialSource>,
}

#[derive(Debug, Clone)]
struct RadialSource {
    field: FieldSpec,
    /// `∫_0^{r_i} b t dt` per node.
    phi: Vec<f64>,
    /// `∫_0^{r_i} b t ln t dt` per node.
    lcum: Vec<f64>,
    lambda_total: f64,
}

/// `h(r) = -ln r ∫_0^r b t dt - ∫_r^∞ b t ln t dt` on the grid nodes.
///
/// Beyond the support radius the table stores `-alpha ln r` exactly.
pub fn compute_h_radial(field: &FieldSpec, grid: &RadialGrid) -> Result<SuperpotentialTable> {
    if !field.is_radial() {
        return Err(HardyError::NonRadialField("superpotential closed form".into()));
    }
    let support = field.support_radius().unwrap();
    let alpha = compute_flux(field)?;
    let pts = field.radial_breakpoints()?;
    let cfg = quad_cfg();
    let b_t = |t: f64| field.b_radial(t).unwrap_or(0.0) * t;
    let b_t_lnt = |t: f64| field.b_radial(t).unwrap_or(0.0) * t * t.ln();

    let lambda_total = adaptive_piecewise(&b_t_lnt, 0.0, support, &pts, &cfg)?;

    let nodes = grid.nodes();
    let mut phi = Vec::with_capacity(nodes.len());
    let mut lcum = Vec::with_capacity(nodes.len());
    let mut h = Vec::with_capacity(nodes.len());
    let mut acc_phi = 0.0;
    let mut acc_l = 0.0;
    let mut prev = 0.0;
    for &r in nodes {
        if prev < support {
            let hi = r.min(support);
            acc_phi += adaptive_piecewise(&b_t, prev, hi, &pts, &cfg)?;
            acc_l += adaptive_piecewise(&b_t_lnt, prev, hi, &pts, &cfg)?;
        }
        prev = r;
        if r >= support {
            phi.push(alpha);
            lcum.push(lambda_total);
            h.push(-alpha * r.ln());
        } else {
            phi.push(acc_phi);
            lcum.push(acc_l);
            h.push(-r.ln() * acc_phi - (lambda_total - acc_l));
        }
    }
    Ok(SuperpotentialTable {
        grid: grid.clone(),
        h,
        alpha,
        tail_start: support,
        tail_exponent: -alpha,
        tail: TailKind::ExactLog,
        source: Some(RadialSource { field: field.clone(), phi, lcum, lambda_total }),
    })
}

impl SuperpotentialTable {
    /// Evaluate `h` at an arbitrary radius.
    pub fn h_at(&self, r: f64) -> f64 {
        assert!(r >= 0.0 && r.is_finite());
        if r >= self.tail_start {
            match self.tail {
                TailKind::ExactLog => return -self.alpha * r.ln(),
                TailKind::Asymptotic { .. } => {
                    if r >= self.grid.r_max() {
                        return -self.alpha * r.ln();
                    }
                }
            }
        }
        if let Some(src) = &self.source {
            if r == 0.0 {
                return -src.lambda_total;
            }
            let (phi_r, l_r) = match self.grid.floor_index(r) {
                Some(i) if self.grid.nodes()[i] == r => (src.phi[i], src.lcum[i]),
                anchor => {
                    let (r0, phi0, l0) = match anchor {
                        Some(i) => (self.grid.nodes()[i], src.phi[i], src.lcum[i]),
                        None => (0.0, 0.0, 0.0),
                    };
                    let support = src.field.support_radius().unwrap();
                    let hi = r.min(support);
                    let pts = src.field.radial_breakpoints().unwrap_or_default();
                    let cfg = quad_cfg();
                    let b_t = |t: f64| src.field.b_radial(t).unwrap_or(0.0) * t;
                    let b_t_lnt =
                        |t: f64| src.field.b_radial(t).unwrap_or(0.0) * t * t.ln();
                    let dphi = if hi > r0 {
                        adaptive_piecewise(&b_t, r0, hi, &pts, &cfg).unwrap_or(0.0)
                    } else {
                        0.0
                    };
                    let dl = if hi > r0 {
                        adaptive_piecewise(&b_t_lnt, r0, hi, &pts, &cfg).unwrap_or(0.0)
                    } else {
                        0.0
                    };
                    (phi0 + dphi, l0 + dl)
                }
            };
            return -r.ln() * phi_r - (src.lambda_total - l_r);
        }
        // Imported table: interpolate linearly in ln r.
        let nodes = self.grid.nodes();
        match self.grid.floor_index(r) {
            None => self.h[0],
            Some(i) if i + 1 == nodes.len() => self.h[i],
            Some(i) => {
                let t = (r / nodes[i]).ln() / (nodes[i + 1] / nodes[i]).ln();
                self.h[i] * (1.0 - t) + self.h[i + 1] * t
            }
        }
    }

    /// Limit of `h` at the origin (finite for integrable fields).
    pub fn h_at_zero(&self) -> f64 {
        match &self.source {
            Some(src) => -src.lambda_total,
            None => self.h[0],
        }
    }

    /// Columnar text export: `#`-prefixed header, then `r h` rows.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "# hardy2d superpotential table")?;
        writeln!(w, "# alpha {:.17e}", self.alpha)?;
        writeln!(w, "# tail_start {:.17e}", self.tail_start)?;
        writeln!(w, "# tail_exponent {:.17e}", self.tail_exponent)?;
        match self.tail {
            TailKind::ExactLog => writeln!(w, "# tail_kind exact_log")?,
            TailKind::Asymptotic { c } => writeln!(w, "# tail_kind asymptotic {c:.17e}")?,
        }
        writeln!(w, "r h")?;
        for (r, h) in self.grid.nodes().iter().zip(&self.h) {
            writeln!(w, "{r:.17e} {h:.17e}")?;
        }
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut alpha = None;
        let mut tail_start = None;
        let mut tail_exponent = None;
        let mut tail = TailKind::ExactLog;
        let mut rs = Vec::new();
        let mut hs = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "r h" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut it = rest.split_whitespace();
                match it.next() {
                    Some("alpha") => alpha = it.next().and_then(|v| v.parse().ok()),
                    Some("tail_start") => tail_start = it.next().and_then(|v| v.parse().ok()),
                    Some("tail_exponent") => {
                        tail_exponent = it.next().and_then(|v| v.parse().ok())
                    }
                    Some("tail_kind") => match it.next() {
                        Some("exact_log") => tail = TailKind::ExactLog,
                        Some("asymptotic") => {
                            let c = it
                                .next()
                                .and_then(|v| v.parse().ok())
                                .ok_or_else(|| {
                                    HardyError::Config("asymptotic tail needs a constant".into())
                                })?;
                            tail = TailKind::Asymptotic { c };
                        }
                        _ => return Err(HardyError::Config("unknown tail kind".into())),
                    },
                    _ => {}
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let r: f64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| HardyError::Config(format!("bad table row: {line}")))?;
            let h: f64 = it
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| HardyError::Config(format!("bad table row: {line}")))?;
            rs.push(r);
            hs.push(h);
        }
        let alpha = alpha.ok_or_else(|| HardyError::Config("missing alpha header".into()))?;
        let tail_start =
            tail_start.ok_or_else(|| HardyError::Config("missing tail_start header".into()))?;
        let tail_exponent = tail_exponent.unwrap_or(-alpha);
        Ok(SuperpotentialTable {
            grid: RadialGrid::from_nodes(rs)?,
            h: hs,
            alpha,
            tail_start,
            tail_exponent,
            tail,
            source: None,
        })
    }
}

/// Comparison profile: 1 inside radius `rho`, `(r/rho)^alpha` outside.
pub fn g_plus(rho: f64, alpha: f64, r: f64) -> f64 {
    if r <= rho {
        1.0
    } else {
        (r / rho).powf(alpha)
    }
}

/// Reciprocal profile `1/g_plus`.
pub fn g_minus(rho: f64, alpha: f64, r: f64) -> f64 {
    if r <= rho {
        1.0
    } else {
        (r / rho).powf(-alpha)
    }
}

/// Gauge-comparison constants at a fixed `rho`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GaugeComparison {
    pub rho: f64,
    pub alpha: f64,
    pub k_plus: f64,
    pub k_minus: f64,
    pub big_k_plus: f64,
    pub big_k_minus: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
}

/// `k± = inf e^{∓h}/g±`, `K± = sup e^{∓h}/g±`, `β± = (k±/K±)²`.
///
/// Grid extrema are refined by golden-section search; the tail beyond
/// `tail_start` contributes its exact constant (`ρ^{±α}`) in the compact
/// radial case, or an envelope interval for asymptotic tables.
pub fn gauge_comparison(table: &SuperpotentialTable, rho: f64) -> Result<GaugeComparison> {
    gauge_comparison_with_tol(table, rho, 1e-6)
}

pub fn gauge_comparison_with_tol(
    table: &SuperpotentialTable,
    rho: f64,
    tail_tol: f64,
) -> Result<GaugeComparison> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(HardyError::Config(format!("rho must be positive, got {rho}")));
    }
    let (k_plus, big_k_plus) = ratio_extremes(table, rho, true, tail_tol)?;
    let (k_minus, big_k_minus) = ratio_extremes(table, rho, false, tail_tol)?;
    let beta_plus = (k_plus / big_k_plus).powi(2).min(1.0);
    let beta_minus = (k_minus / big_k_minus).powi(2).min(1.0);
    Ok(GaugeComparison {
        rho,
        alpha: table.alpha,
        k_plus,
        k_minus,
        big_k_plus,
        big_k_minus,
        beta_plus,
        beta_minus,
    })
}

fn ratio_extremes(
    table: &SuperpotentialTable,
    rho: f64,
    plus: bool,
    tail_tol: f64,
) -> Result<(f64, f64)> {
    let alpha = table.alpha;
    let ratio = move |r: f64| {
        let h = table.h_at(r);
        if plus {
            (-h).exp() / g_plus(rho, alpha, r)
        } else {
            h.exp() * g_plus(rho, alpha, r)
        }
    };
    let scan_hi = table.tail_start.max(rho).min(table.grid.r_max());
    let mut xs: Vec<f64> = table
        .grid
        .nodes()
        .iter()
        .copied()
        .filter(|&r| r <= scan_hi)
        .collect();
    for extra in [rho, table.tail_start] {
        if extra >= table.grid.r_min() && extra <= scan_hi {
            xs.push(extra);
        }
    }
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    if xs.is_empty() {
        xs.push(table.grid.r_min());
    }
    let (_, mut lo) = scan_refine_min(&xs, &ratio, 1e-10);
    let (_, mut hi) = scan_refine_max(&xs, &ratio, 1e-10);

    // r -> 0 limit: g = 1 there and h(0) is finite.
    let h0 = table.h_at_zero();
    let v0 = if plus { (-h0).exp() } else { h0.exp() };
    lo = lo.min(v0);
    hi = hi.max(v0);

    // Tail contribution.
    let tail_value = if plus { rho.powf(alpha) } else { rho.powf(-alpha) };
    match table.tail {
        TailKind::ExactLog => {
            lo = lo.min(tail_value);
            hi = hi.max(tail_value);
        }
        TailKind::Asymptotic { c } => {
            let t0 = table.tail_start.max(rho);
            let envelope = c / t0;
            if envelope <= 0.0 || !envelope.is_finite() {
                return Err(HardyError::TailUnresolved(
                    "asymptotic envelope constant is not positive".into(),
                ));
            }
            let lo_bound = tail_value / (1.0 + envelope);
            let hi_bound = tail_value * (1.0 + envelope);
            // The spread must be irrelevant at the requested tolerance.
            if (hi_bound - lo_bound) > tail_tol * lo.min(lo_bound).abs().max(f64::MIN_POSITIVE) {
                let lo_with = lo.min(lo_bound);
                let hi_with = hi.max(hi_bound);
                let lo_without = lo.min(tail_value);
                let hi_without = hi.max(tail_value);
                let beta_spread = ((lo_without / hi_without).powi(2)
                    - (lo_with / hi_with).powi(2))
                .abs();
                if beta_spread > tail_tol * (lo_without / hi_without).powi(2) {
                    return Err(HardyError::TailUnresolved(format!(
                        "envelope C/r = {envelope:.3e} at r = {t0:.3e} leaves beta uncertain"
                    )));
                }
            }
            lo = lo.min(tail_value);
            hi = hi.max(tail_value);
        }
    }
    if !(lo > 0.0 && hi.is_finite() && lo <= hi) {
        return Err(HardyError::TailUnresolved(format!(
            "ratio extremes out of range: inf {lo:.3e}, sup {hi:.3e}"
        )));
    }
    Ok((lo, hi))
}

/// `λ(R) = ∫_0^R b(t) t ln t dt`.
pub fn lambda_r(field: &FieldSpec, r_outer: f64) -> Result<f64> {
    if !field.is_radial() {
        return Err(HardyError::NonRadialField("lambda(R) needs a radial field".into()));
    }
    let pts = field.radial_breakpoints()?;
    let hi = r_outer.min(field.support_radius().unwrap());
    adaptive_piecewise(
        &|t| field.b_radial(t).unwrap_or(0.0) * t * t.ln(),
        0.0,
        hi,
        &pts,
        &quad_cfg(),
    )
}

/// Closed-form `β₊(R) = e^{2λ(R)} / R^{2α}` for nonnegative radial fields
/// supported inside `(0, R)`.
pub fn radial_beta(field: &FieldSpec, r_outer: f64) -> Result<f64> {
    if !field.is_radial() {
        return Err(HardyError::NonRadialField("radial beta".into()));
    }
    if !field.is_nonnegative_radial()? {
        return Err(HardyError::NegativeFieldUnsupported);
    }
    let support = field.support_radius().unwrap();
    if support > r_outer * (1.0 + 1e-12) {
        return Err(HardyError::InvalidField(format!(
            "support radius {support} exceeds R = {r_outer}"
        )));
    }
    let alpha = compute_flux(field)?;
    if alpha <= 0.0 {
        return Err(HardyError::ZeroFlux);
    }
    let lambda = lambda_r(field, r_outer)?;
    Ok((2.0 * lambda).exp() / r_outer.powf(2.0 * alpha))
}

/// `h` at arbitrary points from Cartesian samples of `B`, through the exact
/// integral of `ln|x-y|` over each rectangular cell against the cell-center
/// density. The singular (containing) cell needs no special case: the
/// antiderivative is finite there.
pub fn compute_h_general(field: &FieldSpec, points: &[(f64, f64)]) -> Result<Vec<f64>> {
    let s = match &field.kind {
        FieldKind::Sampled2D(s) => s,
        _ => {
            return Err(HardyError::InvalidField(
                "general superpotential evaluation needs a sampled 2-D field".into(),
            ))
        }
    };
    let total: f64 = s.values.iter().map(|v| v.abs()).sum();
    if !total.is_finite() {
        return Err(HardyError::NonIntegrableField("sampled field has infinite mass".into()));
    }
    Ok(points.iter().map(|&(x, y)| h_point(s, x, y)).collect())
}

fn h_point(s: &Sampled2D, x: f64, y: f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..s.ny {
        let y_lo = s.origin.1 + j as f64 * s.cell - y;
        let y_hi = y_lo + s.cell;
        for i in 0..s.nx {
            let b = s.values[j * s.nx + i];
            if b == 0.0 {
                continue;
            }
            let x_lo = s.origin.0 + i as f64 * s.cell - x;
            let x_hi = x_lo + s.cell;
            let cell_int = log_rect(x_hi, y_hi) - log_rect(x_lo, y_hi) - log_rect(x_hi, y_lo)
                + log_rect(x_lo, y_lo);
            acc += b * cell_int;
        }
    }
    -acc / (2.0 * std::f64::consts::PI)
}

/// Antiderivative of `ln sqrt(u² + v²)` in both variables:
/// `∂²F/∂u∂v = ln sqrt(u² + v²)`.
fn log_rect(u: f64, v: f64) -> f64 {
    if u == 0.0 || v == 0.0 {
        return 0.0;
    }
    0.5 * u * v * (u * u + v * v).ln() - 1.5 * u * v
        + 0.5 * u * u * (v / u).atan()
        + 0.5 * v * v * (u / v).atan()
}

/// Radialized table from a sampled 2-D field (evaluation along the positive
/// x-axis), with an asymptotic tail fitted on the last decade of nodes.
pub fn radial_table_from_sampled(
    field: &FieldSpec,
    grid: &RadialGrid,
) -> Result<SuperpotentialTable> {
    let alpha = compute_flux(field)?;
    let points: Vec<(f64, f64)> = grid.nodes().iter().map(|&r| (r, 0.0)).collect();
    let h = compute_h_general(field, &points)?;
    // Envelope |e^h r^alpha - 1| * r over the outermost decade.
    let r_max = grid.r_max();
    let mut c: f64 = 0.0;
    for (&r, &hv) in grid.nodes().iter().zip(&h).rev() {
        if r < 0.1 * r_max {
            break;
        }
        let eps = (hv.exp() * r.powf(alpha) - 1.0).abs();
        c = c.max(eps * r);
    }
    Ok(SuperpotentialTable {
        grid: grid.clone(),
        h,
        alpha,
        tail_start: 0.1 * r_max,
        tail_exponent: -alpha,
        tail: TailKind::Asymptotic { c: c.max(f64::MIN_POSITIVE) },
        source: None,
    })
}
