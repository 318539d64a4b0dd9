//! Ground-state threshold d = inf{S(u) : K(u) = 0, u ≠ 0}.
//!
//! Two-stage search over real nonnegative radial profiles:
//!
//! 1. Coarse: Nelder–Mead over a parametric family (sums of origin-centered
//!    Gaussians with free amplitudes and widths), minimizing the projected
//!    action Ŝ(u) = S(u_{λ*(u)}).
//! 2. Refinement: projected gradient descent on the grid values. Each
//!    iterate is rescaled onto the discrete Nehari manifold (secant-refined
//!    λ*), the step direction is −S′(u) projected onto the K-tangent and
//!    preconditioned by (I − Δ)⁻¹ (Sobolev gradient), and a backtracking
//!    line search keeps Ŝ nonincreasing.
//!
//! The restriction to real nonnegative profiles yields a certified upper
//! bound for d together with stationarity residuals; attainment is not
//! claimed. The equivalent characterization d = inf{L(u) : K(u) ≤ 0} with
//! L = S − K/2 = M/2 + (p−3)/(2(p+1))‖u‖_{p+1}^{p+1} cross-checks the value
//! on the visited iterates pushed slightly past their Nehari point.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{
    action_gradient, nehari_gradient, nehari_lambda_star, pair, project_to_nehari, report,
    scale_field,
};
use crate::grid::{RadialField, RadialGrid};
use num_complex::Complex64;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DescentConfig {
    pub seed: u64,
    /// number of independent coarse starts (run in parallel)
    pub starts: usize,
    pub gaussians: usize,
    pub nelder_mead_iters: usize,
    pub max_iters: usize,
    /// stop when the relative S decrease over `stall_window` iterations
    /// falls below `stall_tol`
    pub stall_window: usize,
    pub stall_tol: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            seed: 7,
            starts: 3,
            gaussians: 3,
            nelder_mead_iters: 300,
            max_iters: 6000,
            stall_window: 50,
            stall_tol: 1e-10,
        }
    }
}

/// Converged value and certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub d_value: f64,
    /// |K| at the profile (raw; divide by ‖Du‖² for the relative residual).
    pub residual_k: f64,
    pub gradient_residual: f64,
    pub d_by_l_characterization: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Result plus the minimizer profile and a subsample of visited iterates.
#[derive(Debug)]
pub struct GroundState {
    pub result: GroundStateResult,
    pub profile: RadialField,
    pub visited: Vec<RadialField>,
}

// ---------------------------------------------------------------------------
// Nelder–Mead on the parametric family
// ---------------------------------------------------------------------------

fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    x0: &[f64],
    scale: f64,
    iters: usize,
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];
        if (values[worst] - values[best]).abs()
            <= 1e-12 * values[best].abs().max(1e-12)
        {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x / dim as f64;
            }
        }
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(c, w)| c + alpha * (c - w))
            .collect();
        let fr = f(&reflect);
        if fr < values[best] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + gamma * (c - w))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[worst] = expand;
                values[worst] = fe;
            } else {
                simplex[worst] = reflect;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = fr;
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + rho * (w - c))
                .collect();
            let fc = f(&contract);
            if fc < values[worst] {
                simplex[worst] = contract;
                values[worst] = fc;
            } else {
                let best_point = simplex[best].clone();
                for i in 0..=dim {
                    if i == best {
                        continue;
                    }
                    for (x, b) in simplex[i].iter_mut().zip(&best_point) {
                        *x = b + sigma * (*x - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}

fn mixture_field(grid: &Arc<RadialGrid>, params: &[f64]) -> Result<RadialField> {
    // params = [ln a_1, ln w_1, ln a_2, ln w_2, …]; exponentials keep the
    // profile nonnegative and the widths positive
    RadialField::from_real_fn(grid.clone(), move |r| {
        params
            .chunks(2)
            .map(|c| c[0].exp() * (-r * r / (2.0 * c[1].exp().powi(2))).exp())
            .sum()
    })
}

fn projected_action(grid: &Arc<RadialGrid>, params: &[f64], p: f64) -> f64 {
    let Ok(u) = mixture_field(grid, params) else {
        return f64::INFINITY;
    };
    let Ok(rep) = report(&u, p) else {
        return f64::INFINITY;
    };
    if rep.p_norm <= 1e-14 || !rep.p_norm.is_finite() {
        return f64::INFINITY;
    }
    match project_to_nehari(&u, p) {
        Ok((_, _, r)) => r.action,
        Err(_) => f64::INFINITY,
    }
}

// ---------------------------------------------------------------------------
// Sobolev-preconditioned projected descent
// ---------------------------------------------------------------------------

/// Thomas solve of (I − Δ₂)z = g with the second-order radial stencil
/// (H¹ preconditioner; strictly diagonally dominant).
fn precondition(grid: &RadialGrid, g: &[f64]) -> Vec<f64> {
    let n = grid.n();
    let dr = grid.dr();
    let dr2 = dr * dr;
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    diag[0] = 1.0 + 4.0 / dr2;
    sup[0] = -4.0 / dr2;
    for j in 1..n - 1 {
        let r = grid.node(j);
        sub[j] = -(r - dr / 2.0) / (r * dr2);
        diag[j] = 1.0 + 2.0 / dr2;
        sup[j] = -(r + dr / 2.0) / (r * dr2);
    }
    let r = grid.node(n - 1);
    sub[n - 1] = -(r - dr / 2.0) / (r * dr2);
    diag[n - 1] = 1.0 + 2.0 / dr2;

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = g[0] / diag[0];
    for j in 1..n {
        let m = diag[j] - sub[j] * c[j - 1];
        c[j] = if j < n - 1 { sup[j] / m } else { 0.0 };
        d[j] = (g[j] - sub[j] * d[j - 1]) / m;
    }
    let mut z = vec![0.0; n];
    z[n - 1] = d[n - 1];
    for j in (0..n - 1).rev() {
        z[j] = d[j] - c[j] * z[j + 1];
    }
    z
}

fn real_parts(u: &RadialField) -> Vec<f64> {
    u.values().iter().map(|z| z.re).collect()
}

fn field_from_real(grid: &Arc<RadialGrid>, v: Vec<f64>) -> Result<RadialField> {
    RadialField::new(grid.clone(), v.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
}

struct DescentOutcome {
    u: RadialField,
    action: f64,
    iterations: usize,
    converged: bool,
    visited: Vec<RadialField>,
    fd_check_worst: f64,
}

fn descend(
    grid: &Arc<RadialGrid>,
    seed_field: &RadialField,
    p: f64,
    cfg: &DescentConfig,
    rng: &mut ChaCha8Rng,
) -> Result<DescentOutcome> {
    let (mut u, _, mut rep) = project_to_nehari(seed_field, p)?;
    let mut s = rep.action;
    let mut eta = 0.5;
    let mut history = vec![s];
    let mut visited = vec![u.clone()];
    let mut converged = false;
    let mut fd_worst: f64 = 0.0;
    let mut iters = 0;

    for it in 0..cfg.max_iters {
        iters = it + 1;
        let g = action_gradient(&u, p)?;
        let kg = nehari_gradient(&u, p)?;
        // Sobolev-precondition both directions, then project the step onto
        // the K-tangent: ⟨step, K′⟩ = 0 keeps the projection λ near 1
        let gp = precondition(grid, &real_parts(&g));
        let kp = precondition(grid, &real_parts(&kg));
        let gp_f = field_from_real(grid, gp)?;
        let kp_f = field_from_real(grid, kp)?;
        let num = pair(&u, gp_f.values(), kg.values());
        let den = pair(&u, kp_f.values(), kg.values());
        let coef = if den.abs() > 0.0 { num / den } else { 0.0 };
        let dir: Vec<f64> = gp_f
            .values()
            .iter()
            .zip(kp_f.values())
            .map(|(a, b)| a.re - coef * b.re)
            .collect();

        // occasional finite-difference audit of the analytic gradient
        if it % 100 == 0 {
            let h: Vec<f64> = (0..grid.n())
                .map(|j| {
                    let r = grid.node(j);
                    let w = 1.0 + rng.gen_range(0.0..1.0);
                    (-r * r / (2.0 * w * w)).exp()
                })
                .collect();
            let h_f = field_from_real(grid, h)?;
            let eps = 1e-6;
            let mut up = u.clone();
            let mut um = u.clone();
            for j in 0..grid.n() {
                up.values_mut()[j] += eps * h_f.values()[j];
                um.values_mut()[j] -= eps * h_f.values()[j];
            }
            let fd = (report(&up, p)?.action - report(&um, p)?.action) / (2.0 * eps);
            let lin = pair(&u, g.values(), h_f.values());
            fd_worst = fd_worst.max((fd - lin).abs() / fd.abs().max(1e-12));
        }

        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = u
                .values()
                .iter()
                .zip(&dir)
                .map(|(z, d)| (z.re - eta * d).max(0.0))
                .collect();
            if trial.iter().all(|&x| x <= 0.0) {
                eta *= 0.5;
                continue;
            }
            let trial_f = field_from_real(grid, trial)?;
            let trial_rep = report(&trial_f, p)?;
            if trial_rep.p_norm <= 1e-14 {
                eta *= 0.5;
                continue;
            }
            match project_to_nehari(&trial_f, p) {
                Ok((v, _, rv)) if rv.action < s => {
                    u = v;
                    rep = rv;
                    s = rep.action;
                    eta = (eta * 1.5).min(4.0);
                    accepted = true;
                    break;
                }
                _ => eta *= 0.5,
            }
        }
        if !accepted {
            converged = true;
            break;
        }
        history.push(s);
        if it % 25 == 0 {
            visited.push(u.clone());
        }
        if history.len() > cfg.stall_window {
            let old = history[history.len() - 1 - cfg.stall_window];
            if (old - s) / s.abs().max(1e-300) < cfg.stall_tol {
                converged = true;
                break;
            }
        }
    }
    visited.push(u.clone());
    Ok(DescentOutcome { u, action: s, iterations: iters, converged, visited, fd_check_worst: fd_worst })
}

/// L evaluated just past the Nehari point (K < 0 side) of a trial field.
fn l_past_nehari(u: &RadialField, p: f64) -> Result<f64> {
    let rep = report(u, p)?;
    if rep.p_norm <= 0.0 {
        return Err(Error::domain("zero trial field"));
    }
    let ls = nehari_lambda_star(&rep)?;
    // the push past λ* must stay small: L grows like λ^{p−1} in its p-norm
    // part, so a 1e−3 nudge keeps the characterization within its 1% budget
    let mut lambda = 1.001 * ls;
    for _ in 0..12 {
        let v = scale_field(u, lambda)?;
        let rv = report(&v, p)?;
        if rv.nehari < 0.0 {
            return Ok(rv.l_value);
        }
        lambda *= 1.002;
    }
    Err(Error::domain("could not scale trial field past its Nehari point"))
}

/// d = inf{L(u) : K(u) ≤ 0} over a trial set (visited iterates or any
/// user-supplied family); each trial is pushed slightly past λ* so K < 0.
pub fn cross_check_characterizations(
    result: &GroundStateResult,
    p: f64,
    trials: &[RadialField],
) -> Result<f64> {
    if !result.converged {
        return Err(Error::contract("cross-check requires a converged result"));
    }
    let mut best = f64::INFINITY;
    for u in trials {
        if let Ok(l) = l_past_nehari(u, p) {
            best = best.min(l);
        }
    }
    if !best.is_finite() {
        return Err(Error::domain("empty feasible set in the L characterization"));
    }
    Ok(best)
}

/// Minimize the action over the Nehari manifold.
pub fn minimize_d(p: f64, grid: &Arc<RadialGrid>, cfg: &DescentConfig) -> Result<GroundState> {
    if !(p > 3.0) {
        return Err(Error::contract(format!("minimize_d requires p > 3, got {p}")));
    }

    // stage 1: coarse parametric minimization, independent seeded starts
    let starts: Vec<u64> = (0..cfg.starts.max(1) as u64).collect();
    let coarse: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(s));
            let mut x0 = Vec::with_capacity(2 * cfg.gaussians);
            for _ in 0..cfg.gaussians {
                x0.push(rng.gen_range(-1.0..0.5)); // ln amplitude
                x0.push(rng.gen_range(-0.5..1.0)); // ln width
            }
            let obj = |x: &[f64]| projected_action(grid, x, p);
            nelder_mead(&obj, &x0, 0.4, cfg.nelder_mead_iters)
        })
        .collect();
    let (best_params, _) = coarse
        .into_iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or_else(|| Error::domain("no coarse start succeeded"))?;
    let mut seed_field = mixture_field(grid, &best_params)?;
    if report(&seed_field, p)?.p_norm <= 1e-14 {
        seed_field = RadialField::from_real_fn(grid.clone(), |r| (-r * r / 2.0).exp())?;
    }

    // stage 2: projected descent with restart on collapse
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD1C0_7075);
    let mut outcome = descend(grid, &seed_field, p, cfg, &mut rng)?;
    if !outcome.action.is_finite() || outcome.action <= 0.0 {
        let perturbed = RadialField::from_real_fn(grid.clone(), |r| {
            (-r * r / 2.0).exp() * (1.0 + 0.05 * (3.0 * r).sin())
        })?;
        outcome = descend(grid, &perturbed, p, cfg, &mut rng)?;
    }

    let (u_final, _, rep) = project_to_nehari(&outcome.u, p)?;
    let residual_k = rep.nehari.abs();

    // Nehari-tangential component of S′ at the minimizer
    let g = action_gradient(&u_final, p)?;
    let kg = nehari_gradient(&u_final, p)?;
    let den = pair(&u_final, kg.values(), kg.values());
    let coef = if den > 0.0 { pair(&u_final, g.values(), kg.values()) / den } else { 0.0 };
    let tang: Vec<Complex64> =
        g.values().iter().zip(kg.values()).map(|(a, b)| a - coef * b).collect();
    let gradient_residual = pair(&u_final, &tang, &tang).max(0.0).sqrt();

    let mut result = GroundStateResult {
        d_value: rep.action,
        residual_k,
        gradient_residual,
        d_by_l_characterization: f64::NAN,
        iterations: outcome.iterations,
        converged: outcome.converged && outcome.fd_check_worst < 1e-3,
    };
    let mut trials = outcome.visited.clone();
    trials.push(u_final.clone());
    result.d_by_l_characterization =
        cross_check_characterizations(&result, p, &trials).unwrap_or(f64::NAN);

    Ok(GroundState { result, profile: u_final, visited: outcome.visited })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> DescentConfig {
        DescentConfig {
            seed: 11,
            starts: 2,
            gaussians: 3,
            nelder_mead_iters: 120,
            max_iters: 1500,
            stall_window: 50,
            stall_tol: 1e-10,
        }
    }

    #[test]
    fn preconditioner_solves_shifted_laplacian() {
        let g = RadialGrid::new(257, 16.0).unwrap();
        let rhs: Vec<f64> = g.nodes().iter().map(|&r| (-r * r / 2.0).exp()).collect();
        let z = precondition(&g, &rhs);
        // apply (I − Δ₂) back and compare
        let zf = field_from_real(&Arc::new(g.clone()), z.clone()).unwrap();
        let lap = crate::grid::laplacian_radial(&zf).unwrap();
        for j in 0..g.n() - 1 {
            let back = z[j] - lap.values()[j].re;
            assert!((back - rhs[j]).abs() < 1e-9, "node {j}: {back} vs {}", rhs[j]);
        }
    }

    #[test]
    fn ground_state_small_grid_p5() {
        let grid = Arc::new(RadialGrid::new(512, 24.0).unwrap());
        let gs = minimize_d(5.0, &grid, &small_cfg()).unwrap();
        let r = &gs.result;
        assert!(r.d_value > 0.0);
        // Gaussian trial bound: d ≤ Ŝ(e^{−r²/2}) ≈ 5.23332
        assert!(r.d_value <= 5.2335 * 1.001, "d = {}", r.d_value);
        assert!(r.residual_k < 1e-8, "residual_k = {:e}", r.residual_k);
        // the coarse-grid value should already be near 4.09
        assert!((r.d_value - 4.09).abs() < 0.1, "d = {}", r.d_value);
        assert!(
            (r.d_by_l_characterization - r.d_value).abs() / r.d_value < 1e-2,
            "L cross-check {} vs {}",
            r.d_by_l_characterization,
            r.d_value
        );
        // on-manifold identity at the minimizer
        let rep = report(&gs.profile, 5.0).unwrap();
        let s_manifold = 0.25 * rep.covariant_kinetic() + 0.5 * rep.mass;
        assert!((rep.action - s_manifold).abs() / rep.action < 1e-6);
    }

    #[test]
    fn ground_state_positive_for_p4() {
        let grid = Arc::new(RadialGrid::new(384, 24.0).unwrap());
        let cfg = DescentConfig { max_iters: 800, ..small_cfg() };
        let gs = minimize_d(4.0, &grid, &cfg).unwrap();
        assert!(gs.result.d_value > 0.0);
        assert!(gs.result.residual_k < 1e-8);
    }

    #[test]
    fn rejects_subcritical() {
        let grid = Arc::new(RadialGrid::new(64, 8.0).unwrap());
        assert!(minimize_d(3.0, &grid, &small_cfg()).is_err());
    }
}
