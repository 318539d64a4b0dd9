//! # cssrad
//!
//! A numerical laboratory for the radially symmetric Chern–Simons–Schrödinger
//! equation in two space dimensions,
//!
//!   i∂ₜu + Δu = A₀(|u|²)u + (A_θ(|u|²)/r)²u − |u|^{p−1}u,   p > 3,
//!
//! where the electromagnetic potentials are the explicit nonlocal integrals
//!
//!   A_θ(f)(r) = −½∫₀^r f(ρ)ρ dρ,   A₀(f)(r) = −∫_r^∞ (A_θ(f)/ρ) f(ρ) dρ.
//!
//! The crate provides:
//!
//! - [`grid`]: uniform radial meshes, end-corrected quadrature, norms,
//!   derivative and Laplacian stencils;
//! - [`gauge`]: the potentials A_θ, A_θ/r, A₀ and their identities;
//! - [`functionals`]: mass, energy, action S, Nehari functional K, the
//!   scaling family u_λ = λu(λ·), the explicit Nehari projection, and exact
//!   discrete action gradients;
//! - [`evolution`]: Strang splitting with an exact nonlinear phase rotation
//!   and an exactly mass-conserving Crank–Nicolson linear step, plus blow-up
//!   detection and Morawetz accumulators;
//! - [`ground_state`]: the variational threshold d = inf{S : K = 0} by
//!   Nehari-projected Sobolev-gradient descent;
//! - [`dichotomy`]: 𝒦⁺/𝒦⁻ classification, the localized virial quantity,
//!   Morawetz ratio ladders, and the free-profile scattering monitor;
//! - [`inequalities`]: an empirical harness for the weighted gauge-potential
//!   estimates and the classical interpolation inequalities;
//! - [`experiment`]: reproducible experiment manifests, presets, and CSV/JSON
//!   persistence behind the `cssrad` CLI.
//!
//! Every runnable capability has a corresponding example under `examples/`.

pub mod banded;
pub mod dichotomy;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod functionals;
pub mod gauge;
pub mod grid;
pub mod ground_state;
pub mod inequalities;
pub mod sampling;

pub use error::{Error, Result};
pub use grid::{
    grad_kinetic, h1_norm, laplacian_radial, lq_norm, radial_derivative, strauss_ratio,
    RadialField, RadialGrid,
};
pub use gauge::{a_theta_of, a_zero_of, gauge_from_field, GaugePotentials};
pub use functionals::{
    action_gradient, nehari_gradient, nehari_lambda_star, project_to_nehari, report, scale_field,
    FunctionalReport,
};
pub use evolution::{
    conserved_mass, free_propagate, propagate, step_strang, SimConfig, StrangStepper, Termination,
    TrajectoryLog,
};
pub use ground_state::{
    cross_check_characterizations, minimize_d, DescentConfig, GroundState, GroundStateResult,
};
pub use dichotomy::{
    classify, classify_report, morawetz_check, scattering_monitor, virial_rate_check, virial_value,
    ClassificationResult, CutoffProfile, SetLabel,
};
pub use inequalities::{
    default_cases, empirical_ratio, recorded_constant, sweep_report, CaseKind, InequalityCase,
    SweepReport,
};
pub use experiment::{dichotomy_suite, preset, preset_names, run, ExperimentKind, ExperimentManifest};
