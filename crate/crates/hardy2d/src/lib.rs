//! Hardy-inequality machinery for two-dimensional magnetic Pauli and
//! Schrödinger operators.
//!
//! The crate computes, for a magnetic field of finite normalized flux `α`:
//!
//! * the superpotential `h` solving `-Δh = B` (Newton logarithmic potential),
//!   its radial closed form, and the gauge-comparison constants
//!   `k±(ρ)`, `K±(ρ)`, `β±(B;ρ)`;
//! * the Hardy weights `w±(ρ;x)` and the resulting operator lower bounds,
//!   including the Aharonov–Bohm sharp constant `μ_α²`;
//! * one-dimensional weighted Hardy constants through the Muckenhoupt
//!   criterion `C(V,W) ≤ 4·sup (∫V⁻¹)(∫W)`, with the per-angular-mode
//!   closed forms as oracles;
//! * numerical verification of every bound by per-mode Rayleigh-quotient
//!   minimization on log-spaced finite elements, plus the explicit
//!   sharpness test-function sequences.
//!
//! Start with the runnable programs under `examples/`; each one exercises a
//! single capability end to end. The `hardy2d` binary exposes the same
//! operations as subcommands producing CSV/JSON reports.

pub mod cli;
pub mod config;
pub mod error;
pub mod field;
pub mod grid;
pub mod muckenhoupt;
pub mod quadform;
pub mod quadrature;
pub mod report;
pub mod search;
pub mod superpotential;
pub mod weights;

pub use error::HardyError;
pub use field::{compute_flux, flux_function, validate_decay, FieldSpec, FluxFunction};
pub use grid::RadialGrid;
pub use superpotential::{
    compute_h_general, compute_h_radial, g_minus, g_plus, gauge_comparison, lambda_r, radial_beta,
    GaugeComparison, SuperpotentialTable,
};
pub use weights::{hardy_weight, mu_alpha, pauli_weight_matrix, schrodinger_weight, HardyBound};
