//! Time integration of the reduced flow i∂ₜu + Δu = Λ₁(u) + Λ₂(u) + Λ₃(u).
//!
//! Strang splitting. The nonlinear substep freezes V(r) = A_0 + (A_θ/r)² −
//! |u|^{p−1} from the current |u|²; since V is real and the potentials depend
//! on u only through |u|², the substep i∂ₜu = Vu preserves |u| pointwise and
//! is solved *exactly* by the phase rotation u ← u·e^{−iVδt}. The linear
//! substep is Crank–Nicolson, (1 − i·dt/2·L)u⁺ = (1 + i·dt/2·L)u, with a
//! pentadiagonal fourth-order radial Laplacian L.
//!
//! L is built to be self-adjoint with respect to a *diagonal* positive weight
//! vector ω (a fourth-order-consistent origin closure on the first three
//! rows; the interior stencil is already ω-symmetric for ω_j = r_j·dr). The
//! Cayley step of an ω-self-adjoint operator is exactly ω-unitary, and the
//! phase rotation preserves every diagonal form, so the discrete mass
//!
//!   M_h(u) = 2π Σ_j ω_j |u_j|²
//!
//! is conserved to solver roundoff by the full scheme — this is the M column
//! of the trajectory log. Energy drifts at the O(dt²) splitting order.
//!
//! Origin closure (coefficients in units of 1/dr², weights in units of dr²):
//!
//!   ω = [13/96, 17/18, 577/288, 3, 4, 5, …]
//!   row 0: [−5, 16/3, −1/3]
//!   row 1: [13/17, −45/17, 35/17, −3/17]
//!   row 2: [−13/577, 560/577, −1435/577, 960/577, −72/577]
//!   row j≥3: [−1/12 + 1/(12j), 4/3 − 2/(3j), −5/2, 4/3 + 2/(3j), −1/12 − 1/(12j)]
//!
//! Exactness on {1, r², r⁴} at every interior and origin row makes the
//! operator fourth-order on smooth radial (even) profiles; the weight vector
//! is positive so the conserved form is a genuine discrete mass. The outer
//! node is pinned to zero (homogeneous Dirichlet), and trajectories carry a
//! boundary-mass monitor that aborts a run whose field reaches the wall.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::banded::{BandedLu, BandedMatrix};
use crate::dichotomy::{virial_value, CutoffProfile};
use crate::error::{Error, Result};
use crate::functionals::{report, FunctionalReport};
use crate::gauge::{a_theta_of, a_zero_of};
use crate::grid::{RadialField, RadialGrid};

/// Numerical configuration of one propagation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimConfig {
    pub p: f64,
    pub dt: f64,
    pub t_end: f64,
    pub n: usize,
    pub r_max: f64,
    pub nonlinear_on: bool,
    #[serde(default = "default_blowup_factor")]
    pub blowup_gradient_factor: f64,
    #[serde(default = "default_boundary_tol")]
    pub boundary_mass_tol: f64,
    pub log_stride: usize,
    /// Cutoff radius of the logged virial quantity; `None` means R = r_max,
    /// for which χ(r) = r²/2 on the whole grid.
    #[serde(default)]
    pub virial_big_r: Option<f64>,
    /// Times at which full field snapshots are kept (for scattering checks).
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

fn default_blowup_factor() -> f64 {
    10.0
}
fn default_boundary_tol() -> f64 {
    1e-8
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 3.0) {
            return Err(Error::config(format!("p must exceed 3, got {}", self.p)));
        }
        if !(self.dt > 0.0) || self.dt > 0.01 {
            return Err(Error::config(format!(
                "dt must lie in (0, 0.01] (desk-scale accuracy guard), got {}",
                self.dt
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::config("t_end must be positive"));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.round().max(1.0) {
            return Err(Error::config(format!(
                "t_end/dt = {steps} is not an integer within rounding"
            )));
        }
        if self.n < 16 {
            return Err(Error::config("n must be at least 16"));
        }
        if !(self.r_max > 0.0) {
            return Err(Error::config("r_max must be positive"));
        }
        if !(self.blowup_gradient_factor > 1.0) {
            return Err(Error::config("blowup_gradient_factor must exceed 1"));
        }
        if !(self.boundary_mass_tol > 0.0) {
            return Err(Error::config("boundary_mass_tol must be positive"));
        }
        if self.log_stride == 0 {
            return Err(Error::config("log_stride must be positive"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// How a propagation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    BlowupDetected,
    BoundaryContaminated,
}

/// Time series of diagnostics for one run. All per-log vectors share one
/// length and `times` is strictly increasing.
#[derive(Debug, Clone)]
pub struct TrajectoryLog {
    pub config: SimConfig,
    pub times: Vec<f64>,
    pub reports: Vec<FunctionalReport>,
    /// Exactly conserved discrete mass 2πΣω|u|² (the CSV M column).
    pub conserved_mass: Vec<f64>,
    pub grad_norm: Vec<f64>,
    pub sup_norm: Vec<f64>,
    pub virial: Vec<f64>,
    /// Running ∫₀ᵗ ∫|u|^{p+1} dx ds (trapezoid in time).
    pub morawetz_pnorm: Vec<f64>,
    /// Running ∫₀ᵗ ∫(A_θ/r)²|u|² dx ds.
    pub morawetz_q: Vec<f64>,
    /// Running ∫₀ᵗ ∫A_0|u|² dx ds.
    pub morawetz_a0: Vec<f64>,
    pub termination: Termination,
    pub trigger_time: Option<f64>,
    pub initial_h1: f64,
    pub snapshots: Vec<(f64, RadialField)>,
    pub wall_seconds: f64,
}

/// Diagonal weights of the conserved discrete mass (2π included), on the
/// n−1 dynamical nodes.
fn conserved_weights(grid: &RadialGrid) -> Vec<f64> {
    let m = grid.n() - 1;
    let dr2 = grid.dr() * grid.dr();
    let tp = 2.0 * std::f64::consts::PI;
    (0..m)
        .map(|j| match j {
            0 => tp * dr2 * 13.0 / 96.0,
            1 => tp * dr2 * 17.0 / 18.0,
            2 => tp * dr2 * 577.0 / 288.0,
            _ => tp * dr2 * j as f64,
        })
        .collect()
}

/// Exactly conserved discrete mass of the evolution scheme.
pub fn conserved_mass(u: &RadialField) -> f64 {
    let w = conserved_weights(u.grid());
    u.values().iter().take(w.len()).zip(&w).map(|(z, w)| w * z.norm_sqr()).sum()
}

/// Pentadiagonal radial Laplacian on the dynamical nodes 0..n−2, as bands.
struct L4 {
    m: usize,
    sub2: Vec<f64>,
    sub1: Vec<f64>,
    diag: Vec<f64>,
    sup1: Vec<f64>,
    sup2: Vec<f64>,
}

impl L4 {
    fn build(grid: &RadialGrid) -> L4 {
        let m = grid.n() - 1;
        let s = 1.0 / (grid.dr() * grid.dr());
        let mut sub2 = vec![0.0; m];
        let mut sub1 = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup1 = vec![0.0; m];
        let mut sup2 = vec![0.0; m];
        diag[0] = -5.0 * s;
        sup1[0] = 16.0 / 3.0 * s;
        sup2[0] = -1.0 / 3.0 * s;
        sub1[1] = 13.0 / 17.0 * s;
        diag[1] = -45.0 / 17.0 * s;
        sup1[1] = 35.0 / 17.0 * s;
        sup2[1] = -3.0 / 17.0 * s;
        sub2[2] = -13.0 / 577.0 * s;
        sub1[2] = 560.0 / 577.0 * s;
        diag[2] = -1435.0 / 577.0 * s;
        sup1[2] = 960.0 / 577.0 * s;
        sup2[2] = -72.0 / 577.0 * s;
        for j in 3..m {
            let jf = j as f64;
            sub2[j] = (-1.0 / 12.0 + 1.0 / (12.0 * jf)) * s;
            sub1[j] = (4.0 / 3.0 - 2.0 / (3.0 * jf)) * s;
            diag[j] = -5.0 / 2.0 * s;
            sup1[j] = if j + 1 < m { (4.0 / 3.0 + 2.0 / (3.0 * jf)) * s } else { 0.0 };
            sup2[j] = if j + 2 < m { (-1.0 / 12.0 - 1.0 / (12.0 * jf)) * s } else { 0.0 };
        }
        // entries reaching past the Dirichlet wall were dropped above
        if m >= 1 {
            sup1[m - 1] = 0.0;
            sup2[m - 1] = 0.0;
        }
        if m >= 2 {
            sup2[m - 2] = 0.0;
        }
        L4 { m, sub2, sub1, diag, sup1, sup2 }
    }

    fn apply(&self, u: &[Complex64], out: &mut [Complex64]) {
        let m = self.m;
        for j in 0..m {
            let mut s = self.diag[j] * u[j];
            if j >= 1 {
                s += self.sub1[j] * u[j - 1];
            }
            if j >= 2 {
                s += self.sub2[j] * u[j - 2];
            }
            if j + 1 < m {
                s += self.sup1[j] * u[j + 1];
            }
            if j + 2 < m {
                s += self.sup2[j] * u[j + 2];
            }
            out[j] = s;
        }
    }

    fn cn_matrix(&self, theta: f64, sign: f64) -> BandedMatrix {
        // I − i·sign·θ·L in band storage
        let m = self.m;
        let mut a = BandedMatrix::zeros(m, 2, 2);
        let c = Complex64::new(0.0, -sign * theta);
        for j in 0..m {
            a.set(j, j, Complex64::new(1.0, 0.0) + c * self.diag[j]);
            if j >= 1 {
                a.set(j, j - 1, c * self.sub1[j]);
            }
            if j >= 2 {
                a.set(j, j - 2, c * self.sub2[j]);
            }
            if j + 1 < m {
                a.set(j, j + 1, c * self.sup1[j]);
            }
            if j + 2 < m {
                a.set(j, j + 2, c * self.sup2[j]);
            }
        }
        a
    }
}

/// Cached Strang stepper for a fixed (grid, dt, p).
pub struct StrangStepper {
    grid: Arc<RadialGrid>,
    p: f64,
    dt: f64,
    m: usize,
    l4: L4,
    lu_fwd: BandedLu,
    lu_bwd: BandedLu,
    scratch: Vec<Complex64>,
}

/// Space integrals fed to the Morawetz accumulators at one time.
#[derive(Debug, Clone, Copy, Default)]
pub struct MorawetzIntegrands {
    pub pnorm: f64,
    pub q: f64,
    pub a0: f64,
}

impl StrangStepper {
    pub fn new(grid: Arc<RadialGrid>, dt: f64, p: f64) -> Result<StrangStepper> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::config(format!("dt must be positive, got {dt}")));
        }
        let l4 = L4::build(&grid);
        let theta = dt / 2.0;
        let lu_fwd = l4.cn_matrix(theta, 1.0).factorize()?;
        let lu_bwd = l4.cn_matrix(theta, -1.0).factorize()?;
        let m = grid.n() - 1;
        Ok(StrangStepper {
            grid,
            p,
            dt,
            m,
            l4,
            lu_fwd,
            lu_bwd,
            scratch: vec![Complex64::new(0.0, 0.0); m],
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One Crank–Nicolson step of i∂ₜu = −Δu (`values` holds all n nodes;
    /// the last is pinned to zero).
    pub fn linear_step(&mut self, values: &mut [Complex64]) {
        self.l4.apply(&values[..self.m], &mut self.scratch);
        let theta = self.dt / 2.0;
        for j in 0..self.m {
            // rhs = (I + iθL) u
            self.scratch[j] = values[j] + Complex64::new(0.0, theta) * self.scratch[j];
        }
        self.lu_fwd.solve(&mut self.scratch);
        values[..self.m].copy_from_slice(&self.scratch);
        values[self.m] = Complex64::new(0.0, 0.0);
    }

    /// Exact inverse of `linear_step` (one step of the backward flow).
    pub fn linear_step_back(&mut self, values: &mut [Complex64]) {
        self.l4.apply(&values[..self.m], &mut self.scratch);
        let theta = self.dt / 2.0;
        for j in 0..self.m {
            // rhs = (I − iθL) u
            self.scratch[j] = values[j] - Complex64::new(0.0, theta) * self.scratch[j];
        }
        self.lu_bwd.solve(&mut self.scratch);
        values[..self.m].copy_from_slice(&self.scratch);
        values[self.m] = Complex64::new(0.0, 0.0);
    }

    /// Potentials from the instantaneous density, the exact phase rotation
    /// u ← u e^{−iVδ}, and the space integrals entering the Morawetz
    /// accumulators (evaluated before the rotation; the rotation leaves
    /// every |u|-functional unchanged).
    fn nonlinear_half(&self, values: &mut [Complex64], delta: f64) -> Result<MorawetzIntegrands> {
        let n = self.grid.n();
        let density: Vec<f64> = values.iter().map(|z| z.norm_sqr()).collect();
        let a_theta = a_theta_of(&density, &self.grid)?;
        let a_zero = a_zero_of(&density, &a_theta, &self.grid)?;
        let w = self.grid.quad_weights();
        let mut ints = MorawetzIntegrands::default();
        let pw = (self.p + 1.0) / 2.0;
        for j in 0..n {
            let aor = if j == 0 { 0.0 } else { a_theta[j] / self.grid.node(j) };
            let aor2 = aor * aor;
            ints.pnorm += w[j] * density[j].powf(pw);
            ints.q += w[j] * aor2 * density[j];
            ints.a0 += w[j] * a_zero[j] * density[j];
            let v = a_zero[j] + aor2 - density[j].powf((self.p - 1.0) / 2.0);
            values[j] *= Complex64::from_polar(1.0, -v * delta);
        }
        Ok(ints)
    }

    /// Morawetz integrands without stepping (used at the final time).
    fn integrands(&self, values: &[Complex64]) -> Result<MorawetzIntegrands> {
        let mut tmp = values.to_vec();
        self.nonlinear_half(&mut tmp, 0.0)
    }

    /// One full Strang step; returns the Morawetz integrands at the step
    /// start. With `nonlinear = false` only the linear substep acts.
    pub fn step(&mut self, values: &mut [Complex64], nonlinear: bool) -> Result<MorawetzIntegrands> {
        let half = self.dt / 2.0;
        let ints = if nonlinear {
            self.nonlinear_half(values, half)?
        } else {
            self.integrands(values)?
        };
        self.linear_step(values);
        if nonlinear {
            self.nonlinear_half(values, half)?;
        }
        Ok(ints)
    }
}

/// One Strang step of the full nonlinear flow (one-shot; `propagate` caches
/// the factorizations across steps).
pub fn step_strang(u: &RadialField, dt: f64, p: f64) -> Result<RadialField> {
    u.check_finite()?;
    let mut stepper = StrangStepper::new(u.grid().clone(), dt, p)?;
    let mut values = u.values().to_vec();
    values[u.n() - 1] = Complex64::new(0.0, 0.0);
    stepper.step(&mut values, true)?;
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::corrupted("step_strang produced a non-finite state (blow-up)"));
    }
    RadialField::new(u.grid().clone(), values)
}

/// Linear flow e^{itΔ}u for t of either sign; |t|/dt must be integral.
pub fn free_propagate(u: &RadialField, t: f64, dt: f64) -> Result<RadialField> {
    u.check_finite()?;
    if t == 0.0 {
        return Ok(u.clone());
    }
    let steps_f = t.abs() / dt;
    if (steps_f - steps_f.round()).abs() > 1e-6 * steps_f.round().max(1.0) {
        return Err(Error::contract(format!("|t|/dt = {steps_f} is not an integer within rounding")));
    }
    let steps = steps_f.round() as usize;
    let mut stepper = StrangStepper::new(u.grid().clone(), dt, 4.0)?;
    let mut values = u.values().to_vec();
    values[u.n() - 1] = Complex64::new(0.0, 0.0);
    for _ in 0..steps {
        if t > 0.0 {
            stepper.linear_step(&mut values);
        } else {
            stepper.linear_step_back(&mut values);
        }
    }
    RadialField::new(u.grid().clone(), values)
}

/// Integrate the reduced flow from `u0` until `t_end` or a termination
/// trigger, logging every `log_stride` steps.
pub fn propagate(u0: &RadialField, cfg: &SimConfig) -> Result<TrajectoryLog> {
    cfg.validate()?;
    u0.check_finite()?;
    let grid = u0.grid().clone();
    if grid.n() != cfg.n || (grid.r_max() - cfg.r_max).abs() > 1e-12 * cfg.r_max {
        return Err(Error::contract(format!(
            "initial field grid ({}, {}) does not match config ({}, {})",
            grid.n(),
            grid.r_max(),
            cfg.n,
            cfg.r_max
        )));
    }
    let wall = Instant::now();
    let mut stepper = StrangStepper::new(grid.clone(), cfg.dt, cfg.p)?;
    let cutoff = CutoffProfile::new(&grid, cfg.virial_big_r.unwrap_or(cfg.r_max))?;
    let cons_w = conserved_weights(&grid);
    let n = grid.n();

    let mut values = u0.values().to_vec();
    values[n - 1] = Complex64::new(0.0, 0.0);

    let mut log = TrajectoryLog {
        config: cfg.clone(),
        times: Vec::new(),
        reports: Vec::new(),
        conserved_mass: Vec::new(),
        grad_norm: Vec::new(),
        sup_norm: Vec::new(),
        virial: Vec::new(),
        morawetz_pnorm: Vec::new(),
        morawetz_q: Vec::new(),
        morawetz_a0: Vec::new(),
        termination: Termination::Completed,
        trigger_time: None,
        initial_h1: 0.0,
        snapshots: Vec::new(),
        wall_seconds: 0.0,
    };

    let field_of = |vals: &[Complex64]| RadialField::new(grid.clone(), vals.to_vec());
    let u_init = field_of(&values)?;
    log.initial_h1 = crate::grid::h1_norm(&u_init)?;
    let grad0 = crate::grid::grad_kinetic(&u_init)?.max(0.0).sqrt();

    let steps = cfg.steps();
    let boundary_start = (0.9 * (n as f64 - 1.0)).floor() as usize;
    let mut acc = MorawetzIntegrands::default();
    let mut prev_ints: Option<MorawetzIntegrands> = None;

    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        let finite = values.iter().all(|z| z.re.is_finite() && z.im.is_finite());

        if k % cfg.log_stride == 0 || k == steps || !finite {
            if !finite {
                log.termination = Termination::BlowupDetected;
                log.trigger_time = Some(t);
                break;
            }
            let u = field_of(&values)?;
            let rep = report(&u, cfg.p)?;
            let gn = rep.grad_kinetic.max(0.0).sqrt();
            let sup = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let vir = virial_value(&u, &cutoff)?;
            let mc: f64 =
                values.iter().take(cons_w.len()).zip(&cons_w).map(|(z, w)| w * z.norm_sqr()).sum();

            log.times.push(t);
            log.grad_norm.push(gn);
            log.sup_norm.push(sup);
            log.virial.push(vir);
            log.conserved_mass.push(mc);
            log.morawetz_pnorm.push(acc.pnorm);
            log.morawetz_q.push(acc.q);
            log.morawetz_a0.push(acc.a0);

            // blow-up proxy: gradient growth beyond the configured factor
            if grad0 > 0.0 && gn > cfg.blowup_gradient_factor * grad0 {
                log.reports.push(rep);
                log.termination = Termination::BlowupDetected;
                log.trigger_time = Some(t);
                break;
            }
            // boundary-mass monitor: fraction of M beyond 0.9·r_max
            if rep.mass > 0.0 {
                let w = grid.quad_weights();
                let tail: f64 = (boundary_start..n)
                    .map(|j| w[j] * values[j].norm_sqr())
                    .sum();
                if tail / rep.mass > cfg.boundary_mass_tol {
                    log.reports.push(rep);
                    log.termination = Termination::BoundaryContaminated;
                    log.trigger_time = Some(t);
                    break;
                }
            }
            log.reports.push(rep);
        }

        for &ts in &cfg.snapshot_times {
            if (t - ts).abs() < cfg.dt / 2.0 {
                log.snapshots.push((t, field_of(&values)?));
            }
        }

        if k == steps {
            break;
        }
        let ints = stepper.step(&mut values, cfg.nonlinear_on)?;
        if let Some(prev) = prev_ints {
            acc.pnorm += 0.5 * cfg.dt * (prev.pnorm + ints.pnorm);
            acc.q += 0.5 * cfg.dt * (prev.q + ints.q);
            acc.a0 += 0.5 * cfg.dt * (prev.a0 + ints.a0);
        }
        prev_ints = Some(ints);
    }
    // close the time trapezoid at the final state reached
    if let Some(prev) = prev_ints {
        if log.termination == Termination::Completed {
            let fin = stepper.integrands(&values)?;
            acc.pnorm += 0.5 * cfg.dt * (prev.pnorm + fin.pnorm);
            acc.q += 0.5 * cfg.dt * (prev.q + fin.q);
            acc.a0 += 0.5 * cfg.dt * (prev.a0 + fin.a0);
            let last = log.morawetz_pnorm.len() - 1;
            log.morawetz_pnorm[last] = acc.pnorm;
            log.morawetz_q[last] = acc.q;
            log.morawetz_a0[last] = acc.a0;
        }
    }
    log.wall_seconds = wall.elapsed().as_secs_f64();
    Ok(log)
}
