//! Nonlocal gauge potentials of the radial ansatz.
//!
//! For a radial density f = |u|² the angular and temporal potentials are the
//! explicit integrals
//!
//!   A_θ(f)(r) = −½ ∫₀^r f(ρ) ρ dρ,
//!   A_0(f)(r) = −∫_r^∞ (A_θ(f)(ρ)/ρ) f(ρ) dρ,
//!
//! evaluated with one O(n) prefix pass and one O(n) suffix pass. A_θ vanishes
//! quadratically at the origin, so A_θ/r is given the limit value 0 at node 0,
//! and the tail of A_0 beyond r_max is truncated to zero (fields are expected
//! to have decayed there; the boundary-mass monitor guards that assumption).
//!
//! Structural facts used throughout: A_θ decreases from 0 to −M/(4π), A_0 is
//! nonnegative and nonincreasing, and ∫ A_0 f dx = 2 ∫ (A_θ/r)² f dx.

use crate::error::{Error, Result};
use crate::grid::{RadialField, RadialGrid};

/// Sampled A_θ, A_θ/r, and A_0 profiles for one density.
#[derive(Debug, Clone)]
pub struct GaugePotentials {
    pub a_theta: Vec<f64>,
    pub a_theta_over_r: Vec<f64>,
    pub a_zero: Vec<f64>,
}

/// A_θ(f)(r_j) = −½ ∫₀^{r_j} f ρ dρ; exactly 0 at the origin.
pub fn a_theta_of(density: &[f64], grid: &RadialGrid) -> Result<Vec<f64>> {
    if density.iter().any(|&x| x < 0.0) {
        return Err(Error::contract("a_theta_of: density must be nonnegative"));
    }
    let mut prefix = grid.prefix_integral_r(density)?;
    for p in &mut prefix {
        *p *= -0.5;
    }
    prefix[0] = 0.0;
    Ok(prefix)
}

/// A_0(f)(r_j) = −∫_{r_j}^{r_max} (A_θ/ρ) f dρ, suffix pass; 0 at r_max.
pub fn a_zero_of(density: &[f64], a_theta: &[f64], grid: &RadialGrid) -> Result<Vec<f64>> {
    if density.len() != grid.n() || a_theta.len() != grid.n() {
        return Err(Error::contract("a_zero_of: length mismatch"));
    }
    let integrand: Vec<f64> = (0..grid.n())
        .map(|j| {
            if j == 0 {
                0.0 // A_θ/ρ → 0
            } else {
                a_theta[j] / grid.node(j) * density[j]
            }
        })
        .collect();
    let mut suffix = grid.suffix_integral(&integrand)?;
    for s in &mut suffix {
        *s = -*s;
    }
    Ok(suffix)
}

/// Assemble all potential samples for a field; a_theta_over_r[0] = 0 by the
/// quadratic vanishing of A_θ.
pub fn gauge_from_field(u: &RadialField) -> Result<GaugePotentials> {
    u.check_finite()?;
    let grid = u.grid();
    let density = u.density();
    let a_theta = a_theta_of(&density, grid)?;
    let a_zero = a_zero_of(&density, &a_theta, grid)?;
    let a_theta_over_r = (0..grid.n())
        .map(|j| if j == 0 { 0.0 } else { a_theta[j] / grid.node(j) })
        .collect();
    Ok(GaugePotentials { a_theta, a_theta_over_r, a_zero })
}
