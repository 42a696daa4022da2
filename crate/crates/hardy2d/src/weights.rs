//! Hardy weights and final inequality constants: `μ_α`, `w±(ρ;x)`, the
//! Pauli matrix weight, and the Schrödinger half-factor.

use serde::Serialize;

use crate::error::{HardyError, Result};

/// Integrality is decided with a decade of margin over the 1e-10 flux
/// quadrature tolerance.
pub const INTEGER_FLUX_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spin {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "rho")]
pub enum WeightKind {
    /// `1/(ρ² + |x|²)`
    InverseSquareShifted(f64),
    /// `1/(ρ² + |x|²(1 + ln²(|x|/ρ)))`
    LogCorrected(f64),
    /// `1/|x|²`
    PureInverseSquare,
    Zero,
}

impl WeightKind {
    /// Pointwise value of the bare weight shape (no constant prefactor).
    pub fn eval(&self, x_norm: f64) -> f64 {
        match *self {
            WeightKind::InverseSquareShifted(rho) => 1.0 / (rho * rho + x_norm * x_norm),
            WeightKind::LogCorrected(rho) => {
                if x_norm == 0.0 {
                    return 1.0 / (rho * rho);
                }
                let l = (x_norm / rho).ln();
                1.0 / (rho * rho + x_norm * x_norm * (1.0 + l * l))
            }
            WeightKind::PureInverseSquare => 1.0 / (x_norm * x_norm),
            WeightKind::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ThmNonInteger,
    ThmInteger,
    ThmMinusSpin,
    CorPauli,
    CorSchrodinger,
    ThmAB,
}

/// A computed Hardy constant together with its weight shape and origin.
#[derive(Debug, Clone, Serialize)]
pub struct HardyBound {
    pub constant: f64,
    pub weight: WeightKind,
    pub spin: Spin,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy)]
pub struct WeightOptions {
    /// Keep the printed integer-flux constant `α/(4α+π)` even for negative
    /// integer flux (where it is negative as written) instead of the
    /// `|α|/(4|α|+π)` reading.
    pub literal_constants: bool,
}

impl Default for WeightOptions {
    fn default() -> Self {
        Self { literal_constants: false }
    }
}

/// Distance from `alpha` to the nearest integer; always in [0, 1/2].
pub fn mu_alpha(alpha: f64) -> f64 {
    (alpha - alpha.round()).abs()
}

pub fn is_integer_flux(alpha: f64) -> bool {
    mu_alpha(alpha) < INTEGER_FLUX_EPS
}

/// Constant prefactor of the weight for one spin component (`β` excluded).
fn bare_constant(alpha: f64, opts: &WeightOptions) -> f64 {
    if is_integer_flux(alpha) {
        let a = if opts.literal_constants { alpha.round() } else { alpha.round().abs() };
        if a == 0.0 {
            0.0
        } else {
            a / (4.0 * a + std::f64::consts::PI)
        }
    } else {
        mu_alpha(alpha).powi(2)
    }
}

/// Pointwise Hardy weight `w±(ρ;x)` for the requested spin component.
///
/// The spin must match the sign of the flux: the plus component carries the
/// weight for `α ≥ 0`, the minus component for `α ≤ 0`.
pub fn hardy_weight(alpha: f64, rho: f64, beta: f64, spin: Spin, x_norm: f64) -> Result<f64> {
    hardy_weight_opts(alpha, rho, beta, spin, x_norm, &WeightOptions::default())
}

pub fn hardy_weight_opts(
    alpha: f64,
    rho: f64,
    beta: f64,
    spin: Spin,
    x_norm: f64,
    opts: &WeightOptions,
) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(HardyError::Config(format!("rho must be positive, got {rho}")));
    }
    if !(beta > 0.0 && beta <= 1.0 + 1e-12) {
        return Err(HardyError::Config(format!("beta must lie in (0, 1], got {beta}")));
    }
    if x_norm < 0.0 {
        return Err(HardyError::Config("x_norm must be nonnegative".into()));
    }
    match spin {
        Spin::Plus if alpha < -INTEGER_FLUX_EPS => {
            return Err(HardyError::InvalidSpinSign(format!(
                "plus component carries no weight for alpha = {alpha} < 0"
            )))
        }
        Spin::Minus if alpha > INTEGER_FLUX_EPS => {
            return Err(HardyError::InvalidSpinSign(format!(
                "minus component carries no weight for alpha = {alpha} > 0"
            )))
        }
        Spin::Both => {
            return Err(HardyError::InvalidSpinSign(
                "pointwise weight needs a definite spin component".into(),
            ))
        }
        _ => {}
    }
    if is_integer_flux(alpha) && alpha.round() == 0.0 {
        return Ok(0.0);
    }
    let c = bare_constant(alpha, opts);
    let shape = if is_integer_flux(alpha) {
        WeightKind::LogCorrected(rho)
    } else {
        WeightKind::InverseSquareShifted(rho)
    };
    Ok(beta * c * shape.eval(x_norm))
}

/// Diagonal 2x2 Pauli weight matrix; the active spin slot carries `w±`.
pub fn pauli_weight_matrix(
    alpha: f64,
    rho: f64,
    beta_plus: f64,
    beta_minus: f64,
    x_norm: f64,
) -> Result<[[f64; 2]; 2]> {
    let mut m = [[0.0; 2]; 2];
    if alpha > INTEGER_FLUX_EPS || (is_integer_flux(alpha) && alpha.round() > 0.0) {
        m[0][0] = hardy_weight(alpha, rho, beta_plus, Spin::Plus, x_norm)?;
    } else if alpha < -INTEGER_FLUX_EPS || (is_integer_flux(alpha) && alpha.round() < 0.0) {
        m[1][1] = hardy_weight(alpha, rho, beta_minus, Spin::Minus, x_norm)?;
    }
    Ok(m)
}

/// Magnetic Schrödinger weight: half of `w_σ` with `σ = sign(α)`.
pub fn schrodinger_weight(alpha: f64, rho: f64, beta_sigma: f64, x_norm: f64) -> Result<f64> {
    if is_integer_flux(alpha) && alpha.round() == 0.0 {
        return Err(HardyError::ZeroFlux);
    }
    let spin = if alpha > 0.0 { Spin::Plus } else { Spin::Minus };
    Ok(0.5 * hardy_weight(alpha, rho, beta_sigma, spin, x_norm)?)
}

/// Assemble the operator-level bound record for a given flux and `β±`.
pub fn theorem_bound(
    alpha: f64,
    rho: f64,
    beta_plus: f64,
    beta_minus: f64,
    opts: &WeightOptions,
) -> HardyBound {
    if is_integer_flux(alpha) && alpha.round() == 0.0 {
        return HardyBound {
            constant: 0.0,
            weight: WeightKind::Zero,
            spin: Spin::Both,
            provenance: Provenance::CorPauli,
        };
    }
    let plus = alpha > 0.0;
    let beta = if plus { beta_plus } else { beta_minus };
    let c = beta * bare_constant(alpha, opts);
    let (weight, provenance) = if is_integer_flux(alpha) {
        (
            WeightKind::LogCorrected(rho),
            if plus { Provenance::ThmInteger } else { Provenance::ThmMinusSpin },
        )
    } else {
        (
            WeightKind::InverseSquareShifted(rho),
            if plus { Provenance::ThmNonInteger } else { Provenance::ThmMinusSpin },
        )
    };
    HardyBound {
        constant: c,
        weight,
        spin: if plus { Spin::Plus } else { Spin::Minus },
        provenance,
    }
}

/// The Aharonov–Bohm bound `μ_α²` against `1/|x|²` (both spins).
pub fn ab_bound(alpha: f64) -> HardyBound {
    HardyBound {
        constant: mu_alpha(alpha).powi(2),
        weight: if mu_alpha(alpha) == 0.0 {
            WeightKind::Zero
        } else {
            WeightKind::PureInverseSquare
        },
        spin: Spin::Both,
        provenance: Provenance::ThmAB,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mu_values() {
        assert_abs_diff_eq!(mu_alpha(0.5), 0.5, epsilon = 0.0);
        assert_abs_diff_eq!(mu_alpha(2.0), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(mu_alpha(1.25), 0.25, epsilon = 1e-16);
    }

    #[test]
    fn weight_at_center_non_integer() {
        let w = hardy_weight(0.5, 1.0, 1.0, Spin::Plus, 0.0).unwrap();
        assert_abs_diff_eq!(w, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn weight_zero_flux_vanishes() {
        let w = hardy_weight(0.0, 1.0, 1.0, Spin::Plus, 3.7).unwrap();
        assert_abs_diff_eq!(w, 0.0, epsilon = 0.0);
    }

    #[test]
    fn weight_integer_flux_log_branch() {
        let w = hardy_weight(1.0, 1.0, 1.0, Spin::Plus, 1.0).unwrap();
        let expected = 1.0 / (2.0 * (4.0 + std::f64::consts::PI));
        assert_abs_diff_eq!(w, expected, epsilon = 1e-15);
    }

    #[test]
    fn weight_log_branch_finite_at_origin() {
        let w = hardy_weight(1.0, 2.0, 1.0, Spin::Plus, 0.0).unwrap();
        let expected = (1.0 / (4.0 + std::f64::consts::PI)) / 4.0;
        assert_abs_diff_eq!(w, expected, epsilon = 1e-15);
    }

    #[test]
    fn spin_sign_enforced() {
        assert!(matches!(
            hardy_weight(-0.5, 1.0, 1.0, Spin::Plus, 0.0),
            Err(HardyError::InvalidSpinSign(_))
        ));
        assert!(hardy_weight(-0.5, 1.0, 1.0, Spin::Minus, 0.0).is_ok());
    }

    #[test]
    fn pauli_matrix_slots() {
        let m = pauli_weight_matrix(0.5, 1.0, 1.0, 1.0, 0.0).unwrap();
        assertickabs(m[0][0], 0.25);
        assert_abs_diff_eq!(m[1][1], 0.0, epsilon = 0.0);
        let z = pauli_weight_matrix(0.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(z[0][0] + z[1][1], 0.0, epsilon = 0.0);
        let n = pauli_weight_matrix(-0.5, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(n[0][0], 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(n[1][1], 0.25, epsilon = 1e-15);
    }

    fn assertickabs(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-15, "{a} vs {b}");
    }

    #[test]
    fn schrodinger_half_factor() {
        let w = schrodinger_weight(0.5, 1.0, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(w, 0.125, epsilon = 1e-15);
        let w = schrodinger_weight(-0.3, 2.0, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(w, 0.005625, epsilon = 1e-15);
        assert!(matches!(schrodinger_weight(0.0, 1.0, 1.0, 0.0), Err(HardyError::ZeroFlux)));
    }

    #[test]
    fn literal_constants_switch() {
        let opts = WeightOptions { literal_constants: true };
        let b = theorem_bound(-1.0, 1.0, 1.0, 1.0, &opts);
        assert!(b.constant < 0.0, "literal reading keeps the printed sign");
        let b = theorem_bound(-1.0, 1.0, 1.0, 1.0, &WeightOptions::default());
        assert!(b.constant > 0.0);
        assert_abs_diff_eq!(
            b.constant,
            1.0 / (4.0 + std::f64::consts::PI),
            epsilon = 1e-15
        );
    }

    #[test]
    fn weight_decreasing_beyond_rho() {
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let x = 1.0 + i as f64 * 0.5;
            let w = hardy_weight(0.3, 1.0, 0.9, Spin::Plus, x).unwrap();
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn integrability_growth_rates() {
        // Integrate w * 2πr dr numerically per decade: the shifted
        // inverse-square branch accumulates ~ ln10 per decade, the
        // log-corrected branch is summable.
        use crate::quadrature::{adaptive, QuadCfg};
        let cfg = QuadCfg::default();
        let shifted = WeightKind::InverseSquareShifted(1.0);
        let log = WeightKind::LogCorrected(1.0);
        let decade = |k: WeightKind, lo: f64, hi: f64| {
            adaptive(&|r: f64| k.eval(r) * r, lo, hi, &cfg).unwrap()
        };
        let s1 = decade(shifted, 1e2, 1e4);
        let s2 = decade(shifted, 1e4, 1e6);
        assert!((s1 - s2).abs() < 0.01 * s1, "inverse-square decades equal: {s1} {s2}");
        let l1 = decade(log, 1e2, 1e4);
        let l2 = decade(log, 1e4, 1e6);
        assert!(l2 < 0.5 * l1, "log-corrected decades shrink: {l1} {l2}");
    }

    #[test]
    fn bound_serialization_shape() {
        let b = theorem_bound(0.4, 1.0, 0.9, 0.9, &WeightOptions::default());
        let json = serde_json::to_value(&b).unwrap();
        assert!(json.get("constant").is_some());
        assert!(json.get("weight").is_some());
        assert!(json.get("spin").is_some());
        assert!(json.get("provenance").is_some());
        assert_abs_diff_eq!(
            json["constant"].as_f64().unwrap(),
            0.9 * 0.16,
            epsilon = 1e-12
        );
    }
}
