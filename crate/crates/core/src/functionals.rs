//! Conserved functionals, the action/Nehari pair, and the scaling family.
//!
//! With the covariant kinetic energy reduced radially,
//! |(∇+iA)u|² = |∇u|² + (A_θ/r)²|u|², the functionals are
//!
//!   M = ∫|u|²,   E = ½(‖∇u‖² + Q) − ‖u‖_{p+1}^{p+1}/(p+1),   S = E + M/2,
//!   K = ‖∇u‖² + Q − (p−1)/(p+1)·‖u‖_{p+1}^{p+1},   L = S − K/2,
//!
//! where Q = ∫(A_θ/r)²|u|² is the gauge self-interaction charge. Under the
//! scaling u_λ(r) = λ u(λr) the mass is invariant and
//!
//!   S(u_λ) = λ²/2·‖Du‖² + M/2 − λ^{p−1}/(p+1)·‖u‖_{p+1}^{p+1},
//!   K(u_λ) = λ²‖Du‖² − λ^{p−1}(p−1)/(p+1)·‖u‖_{p+1}^{p+1},
//!
//! so K(u_λ) = 0 at λ*^{p−3} = (p+1)‖Du‖²/((p−1)‖u‖_{p+1}^{p+1}) — the
//! explicit Nehari projection used by the ground-state solver.
//!
//! The gradient S′(u) = −Δu + u + (A_θ/r)²u + A_0 u − |u|^{p−1}u discretizes
//! the kinetic part as the exact adjoint of the kinetic quadrature, so the
//! directional-derivative check against central finite differences closes to
//! quadrature roundoff rather than stencil error.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::gauge_from_field;
use crate::grid::{apply_d4, apply_d4_transpose, RadialField};
use num_complex::Complex64;

/// Values of M, E, S, K, L, Q and friends for one field at one exponent p.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctionalReport {
    pub mass: f64,
    pub energy: f64,
    pub action: f64,
    pub nehari: f64,
    pub l_value: f64,
    pub q_charge: f64,
    pub grad_kinetic: f64,
    pub p_norm: f64,
    pub p: f64,
}

impl FunctionalReport {
    /// ‖Du‖² = ‖∇u‖² + Q, the covariant kinetic energy.
    pub fn covariant_kinetic(&self) -> f64 {
        self.grad_kinetic + self.q_charge
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 3.0) {
        return Err(Error::contract(format!(
            "mass-supercritical regime requires p > 3, got {p}"
        )));
    }
    Ok(())
}

/// Evaluate every functional. The covariant kinetic term is always assembled
/// as grad_kinetic + q_charge from the radial reduction.
pub fn report(u: &RadialField, p: f64) -> Result<FunctionalReport> {
    check_p(p)?;
    u.check_finite()?;
    let grid = u.grid();
    let w = grid.quad_weights();
    let density = u.density();
    let pots = gauge_from_field(u)?;

    let du = apply_d4(grid, u.values());
    let mut grad_kinetic = 0.0;
    let mut q_charge = 0.0;
    let mut p_norm = 0.0;
    let mut mass = 0.0;
    let half_p1 = (p + 1.0) / 2.0;
    for j in 0..grid.n() {
        grad_kinetic += w[j] * du[j].norm_sqr();
        let a = pots.a_theta_over_r[j];
        q_charge += w[j] * a * a * density[j];
        p_norm += w[j] * density[j].powf(half_p1);
        mass += w[j] * density[j];
    }
    let energy = 0.5 * (grad_kinetic + q_charge) - p_norm / (p + 1.0);
    let action = energy + 0.5 * mass;
    let nehari = grad_kinetic + q_charge - (p - 1.0) / (p + 1.0) * p_norm;
    let l_value = action - 0.5 * nehari;
    Ok(FunctionalReport {
        mass,
        energy,
        action,
        nehari,
        l_value,
        q_charge,
        grad_kinetic,
        p_norm,
        p,
    })
}

/// u_λ(r) = λ u(λr), resampled on the same grid by linear interpolation
/// (zero beyond the original support).
pub fn scale_field(u: &RadialField, lambda: f64) -> Result<RadialField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::contract(format!("scale_field requires λ > 0, got {lambda}")));
    }
    if lambda == 1.0 {
        return Ok(u.clone());
    }
    let grid = u.grid().clone();
    let values: Vec<Complex64> = grid
        .nodes()
        .iter()
        .map(|&r| lambda * u.sample_linear(lambda * r))
        .collect();
    RadialField::new(grid, values)
}

/// λ* with K(u_{λ*}) = 0: λ*^{p−3} = (p+1)‖Du‖² / ((p−1)‖u‖_{p+1}^{p+1}).
pub fn nehari_lambda_star(rep: &FunctionalReport) -> Result<f64> {
    if rep.p_norm <= 0.0 {
        return Err(Error::domain(
            "nehari_lambda_star: zero field has no Nehari projection",
        ));
    }
    let p = rep.p;
    let ratio = (p + 1.0) * rep.covariant_kinetic() / ((p - 1.0) * rep.p_norm);
    Ok(ratio.powf(1.0 / (p - 3.0)))
}

/// Scale `u` onto the discrete Nehari manifold: secant refinement of λ seeded
/// by the closed-form λ*, driving K(u_λ) of the *resampled* field to zero.
/// Returns the projected field, the λ used, and its report.
pub fn project_to_nehari(u: &RadialField, p: f64) -> Result<(RadialField, f64, FunctionalReport)> {
    check_p(p)?;
    let rep = report(u, p)?;
    let mut l1 = nehari_lambda_star(&rep)?;
    let k_of = |l: f64| -> Result<(RadialField, FunctionalReport)> {
        let v = scale_field(u, l)?;
        let r = report(&v, p)?;
        Ok((v, r))
    };
    let (mut v1, mut r1) = k_of(l1)?;
    let scale = r1.covariant_kinetic().max(f64::MIN_POSITIVE);
    if r1.nehari.abs() <= 1e-13 * scale {
        return Ok((v1, l1, r1));
    }
    let mut l0 = l1 * 1.002;
    let (mut v0, mut r0) = k_of(l0)?;
    // secant iteration on λ ↦ K(u_λ)
    for _ in 0..80 {
        let denom = r1.nehari - r0.nehari;
        if denom.abs() < f64::MIN_POSITIVE {
            break;
        }
        let l2 = l1 - r1.nehari * (l1 - l0) / denom;
        if !(l2 > 0.0) || !l2.is_finite() {
            break;
        }
        l0 = l1;
        v0 = v1;
        r0 = r1;
        l1 = l2;
        let (v, r) = k_of(l1)?;
        v1 = v;
        r1 = r;
        if r1.nehari.abs() <= 1e-13 * r1.covariant_kinetic().max(f64::MIN_POSITIVE) {
            return Ok((v1, l1, r1));
        }
    }
    if r0.nehari.abs() < r1.nehari.abs() {
        Ok((v0, l0, r0))
    } else {
        Ok((v1, l1, r1))
    }
}

/// Pairing Σ_j w_j Re(g_j conj(h_j)): the discrete form of 2π∫Re(g h̄) r dr.
pub fn pair(u: &RadialField, g: &[Complex64], h: &[Complex64]) -> f64 {
    u.grid()
        .quad_weights()
        .iter()
        .zip(g.iter().zip(h))
        .map(|(w, (a, b))| w * (a * b.conj()).re)
        .sum()
}

fn kinetic_gradient_density(u: &RadialField) -> Vec<Complex64> {
    // exact gradient of Σ w |D₄u|²: density-form (1/w_j)·[D₄ᵀ(w ∘ D₄u)]_j
    let grid = u.grid();
    let w = grid.quad_weights();
    let mut du = apply_d4(grid, u.values());
    for (z, wj) in du.iter_mut().zip(w) {
        *z *= *wj;
    }
    let mut out = apply_d4_transpose(grid, &du);
    for (z, wj) in out.iter_mut().zip(w) {
        *z /= *wj;
    }
    out
}

/// S′(u) = −Δu + u + (A_θ/r)²u + A_0 u − |u|^{p−1}u, with the kinetic part
/// realized as the exact adjoint pair of the kinetic quadrature so that
/// (S(u+εh) − S(u−εh))/2ε = Σ w Re(S′ h̄) to quadrature accuracy.
pub fn action_gradient(u: &RadialField, p: f64) -> Result<RadialField> {
    check_p(p)?;
    u.check_finite()?;
    let pots = gauge_from_field(u)?;
    let kin = kinetic_gradient_density(u);
    let values: Vec<Complex64> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let a = pots.a_theta_over_r[j];
            let pot = 1.0 + a * a + pots.a_zero[j];
            kin[j] + pot * z - z.norm_sqr().powf((p - 1.0) / 2.0) * z
        })
        .collect();
    RadialField::new(u.grid().clone(), values)
}

/// K′(u) = −2Δu + 2(A_θ/r)²u + 2A_0 u − (p−1)|u|^{p−1}u.
pub fn nehari_gradient(u: &RadialField, p: f64) -> Result<RadialField> {
    check_p(p)?;
    u.check_finite()?;
    let pots = gauge_from_field(u)?;
    let kin = kinetic_gradient_density(u);
    let values: Vec<Complex64> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let a = pots.a_theta_over_r[j];
            let pot = a * a + pots.a_zero[j];
            2.0 * (kin[j] + pot * z) - (p - 1.0) * z.norm_sqr().powf((p - 1.0) / 2.0) * z
        })
        .collect();
    RadialField::new(u.grid().clone(), values)
}
