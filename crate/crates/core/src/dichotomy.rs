//! Threshold classification, the localized virial quantity, Morawetz
//! accumulator checks, and the free-profile scattering monitor.
//!
//! The sets are defined against a ground-state reference d:
//! 𝒦⁺ = {S < d, K > 0} (global existence and scattering) and
//! 𝒦⁻ = {S < d, K < 0} (finite-time blow-up, p ≤ 5).
//!
//! The localized virial quantity V[u] = Im∫ū(D₁u ∂₁χ_R + D₂u ∂₂χ_R)dx
//! collapses radially: ∂_jχ_R = χ_R′·x_j/r and x·A ≡ 0 under the radial
//! ansatz, so V = 2π Im∫ ū u_r χ_R′(r) r dr — the covariant and plain
//! derivatives agree inside the virial pairing. Its time derivative tracks
//! 2K(u) up to O(R^{−σ}) cutoff corrections, σ = min{2, (p−1)/2}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{free_propagate, Termination, TrajectoryLog};
use crate::functionals::FunctionalReport;
use crate::grid::{h1_norm, radial_derivative, RadialField, RadialGrid};

/// Radial cutoff χ_R with χ_R(r) = r²/2 for r ≤ R, constant for r ≥ 10R,
/// and χ_R″ ≤ 1 everywhere. The connector on [R, 10R] drives the slope from
/// R to 0 with a quintic smoothstep, so χ″ stays in [−5/24, 0] there.
#[derive(Debug, Clone)]
pub struct CutoffProfile {
    pub big_r: f64,
    pub chi: Vec<f64>,
    pub chi_prime: Vec<f64>,
}

impl CutoffProfile {
    pub fn new(grid: &RadialGrid, big_r: f64) -> Result<CutoffProfile> {
        if !(big_r > 0.0) || !big_r.is_finite() {
            return Err(Error::contract(format!("cutoff radius must be positive, got {big_r}")));
        }
        let r1 = big_r;
        let r2 = 10.0 * big_r;
        let span = r2 - r1;
        // smoothstep factor: slope χ' = R·ψ(τ), ψ = 1 − (10τ³ − 15τ⁴ + 6τ⁵)
        let psi = |tau: f64| 1.0 - (10.0 * tau.powi(3) - 15.0 * tau.powi(4) + 6.0 * tau.powi(5));
        let psi_int = |tau: f64| tau - (2.5 * tau.powi(4) - 3.0 * tau.powi(5) + tau.powi(6));
        let chi_flat = r1 * r1 / 2.0 + r1 * span * psi_int(1.0);
        let mut chi = Vec::with_capacity(grid.n());
        let mut chi_prime = Vec::with_capacity(grid.n());
        for &r in grid.nodes() {
            if r <= r1 {
                chi.push(r * r / 2.0);
                chi_prime.push(r);
            } else if r < r2 {
                let tau = (r - r1) / span;
                chi.push(r1 * r1 / 2.0 + r1 * span * psi_int(tau));
                chi_prime.push(r1 * psi(tau));
            } else {
                chi.push(chi_flat);
                chi_prime.push(0.0);
            }
        }
        Ok(CutoffProfile { big_r, chi, chi_prime })
    }

    /// Largest discrete second difference (χ″ ≤ 1 check).
    pub fn max_discrete_second_derivative(&self, grid: &RadialGrid) -> f64 {
        let dr2 = grid.dr() * grid.dr();
        self.chi
            .windows(3)
            .map(|w| (w[2] - 2.0 * w[1] + w[0]) / dr2)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetLabel {
    KPlus,
    KMinus,
    AboveThreshold,
    OnBoundary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub s_value: f64,
    pub k_value: f64,
    pub d_reference: f64,
    pub set_label: SetLabel,
    /// min of the normalized distances (d − S)/d and |K|/‖Du‖².
    pub margin: f64,
}

/// Label a report against the threshold d.
pub fn classify_report(rep: &FunctionalReport, d_reference: f64) -> Result<ClassificationResult> {
    if !(d_reference > 0.0) {
        return Err(Error::contract(format!(
            "classify requires a positive d reference, got {d_reference}"
        )));
    }
    let s = rep.action;
    let k = rep.nehari;
    let kin = rep.covariant_kinetic().max(f64::MIN_POSITIVE);
    let margin = ((d_reference - s) / d_reference).min(k.abs() / kin);
    let boundary = (d_reference - s).abs() < 1e-10 * d_reference || k.abs() < 1e-10 * kin;
    let set_label = if boundary {
        SetLabel::OnBoundary
    } else if s >= d_reference {
        SetLabel::AboveThreshold
    } else if k > 0.0 {
        SetLabel::KPlus
    } else {
        SetLabel::KMinus
    };
    Ok(ClassificationResult { s_value: s, k_value: k, d_reference, set_label, margin })
}

/// Classify initial data into 𝒦⁺ / 𝒦⁻ / above-threshold.
pub fn classify(u0: &RadialField, p: f64, d_reference: f64) -> Result<ClassificationResult> {
    let rep = crate::functionals::report(u0, p)?;
    classify_report(&rep, d_reference)
}

/// V = 2π Im ∫ ū u_r χ_R′ r dr (the radial reduction of the localized
/// virial quantity; x·A vanishes identically under the ansatz).
pub fn virial_value(u: &RadialField, cutoff: &CutoffProfile) -> Result<f64> {
    let grid = u.grid();
    if cutoff.chi_prime.len() != grid.n() {
        return Err(Error::contract("virial_value: cutoff sampled on a different grid"));
    }
    let du = radial_derivative(u)?;
    let w = grid.quad_weights();
    Ok(u.values()
        .iter()
        .zip(du.values())
        .zip(cutoff.chi_prime.iter().zip(w))
        .map(|((uj, duj), (cp, wj))| wj * cp * (uj.conj() * duj).im)
        .sum())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VirialRateReport {
    /// max_t |dV/dt − 2·reference(t)|, centered differences in t.
    pub max_abs_deviation: f64,
    /// deviation relative to max_t |2·reference|.
    pub max_rel_deviation: f64,
    pub sigma: f64,
    /// C with max deviation = C·R^{−σ}.
    pub fitted_c: f64,
    pub big_r: f64,
    /// fraction of interior times with dV/dt < 0 (blow-up mechanism probe).
    pub negative_rate_fraction: f64,
}

/// Compare the finite-difference slope of the logged virial series against
/// 2K(u(t)) (or 2‖∇u‖² on linear-only runs, where the p-term is absent).
pub fn virial_rate_check(log: &TrajectoryLog, cutoff: &CutoffProfile) -> Result<VirialRateReport> {
    let n = log.times.len();
    if n < 3 {
        return Err(Error::domain("virial_rate_check needs at least 3 logged times"));
    }
    let p = log.config.p;
    let sigma = 2.0f64.min((p - 1.0) / 2.0);
    let reference: Vec<f64> = log
        .reports
        .iter()
        .map(|r| if log.config.nonlinear_on { r.nehari } else { r.grad_kinetic })
        .collect();
    let mut max_abs: f64 = 0.0;
    let mut ref_scale: f64 = 0.0;
    let mut neg = 0usize;
    for k in 1..n - 1 {
        let dvdt = (log.virial[k + 1] - log.virial[k - 1]) / (log.times[k + 1] - log.times[k - 1]);
        let target = 2.0 * reference[k];
        max_abs = max_abs.max((dvdt - target).abs());
        ref_scale = ref_scale.max(target.abs());
        if dvdt < 0.0 {
            neg += 1;
        }
    }
    Ok(VirialRateReport {
        max_abs_deviation: max_abs,
        max_rel_deviation: max_abs / ref_scale.max(f64::MIN_POSITIVE),
        sigma,
        fitted_c: max_abs * cutoff.big_r.powf(sigma),
        big_r: cutoff.big_r,
        negative_rate_fraction: neg as f64 / (n - 2) as f64,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorawetzReport {
    pub alpha: f64,
    pub sigma: f64,
    pub horizons: Vec<f64>,
    /// total accumulator (three space-time integrals summed) at each horizon.
    pub accumulators: Vec<f64>,
    /// accumulator(T) / T^α ladder.
    pub ratios: Vec<f64>,
    pub max_over_min_ratio: f64,
    pub bounded: bool,
    /// max over horizons of |acc_{A0} − 2 acc_Q| / acc_{A0}.
    pub identity_max_rel_err: f64,
}

/// Check the space-time bound: accumulator(T) ≲ T^α with α = 1/(1+σ),
/// σ = min{2, (p−1)/2}, over a ladder of horizons, plus the structural
/// identity ∫∫A₀|u|² = 2∫∫(A_θ/r)²|u|².
pub fn morawetz_check(log: &TrajectoryLog, p: f64, horizons: &[f64]) -> Result<MorawetzReport> {
    if log.termination != Termination::Completed {
        return Err(Error::domain("morawetz_check requires a completed run"));
    }
    if horizons.is_empty() {
        return Err(Error::domain("morawetz_check needs at least one horizon"));
    }
    let sigma = 2.0f64.min((p - 1.0) / 2.0);
    let alpha = 1.0 / (1.0 + sigma);
    let mut ratios = Vec::new();
    let mut accs = Vec::new();
    let mut ident: f64 = 0.0;
    for &t in horizons {
        let idx = log
            .times
            .iter()
            .position(|&s| (s - t).abs() < 0.5 * log.config.dt * log.config.log_stride as f64)
            .ok_or_else(|| Error::domain(format!("horizon {t} not present in the log")))?;
        let total = log.morawetz_pnorm[idx] + log.morawetz_q[idx] + log.morawetz_a0[idx];
        accs.push(total);
        ratios.push(total / t.powf(alpha));
        if log.morawetz_a0[idx] > 0.0 {
            ident = ident
                .max((log.morawetz_a0[idx] - 2.0 * log.morawetz_q[idx]).abs() / log.morawetz_a0[idx]);
        }
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    let max_over_min = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok(MorawetzReport {
        alpha,
        sigma,
        horizons: horizons.to_vec(),
        accumulators: accs,
        ratios,
        max_over_min_ratio: max_over_min,
        bounded: max_over_min < 10.0,
        identity_max_rel_err: ident,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub checkpoint_times: Vec<f64>,
    /// ‖w(t_{k+1}) − w(t_k)‖_{H¹} with w(t) = e^{−itΔ}u(t).
    pub increments: Vec<f64>,
    pub decreasing: bool,
    pub final_increment: f64,
    pub threshold: f64,
    pub scattering_flag: bool,
}

/// Cauchy test on the pulled-back profiles w(t) = e^{−itΔ}u(t): if u
/// scatters, w(t) converges in H¹ and the checkpoint increments shrink.
pub fn scattering_monitor(log: &TrajectoryLog, dt: f64) -> Result<ScatteringReport> {
    if log.termination == Termination::BlowupDetected {
        return Err(Error::domain("scattering_monitor refuses a blow-up-terminated run"));
    }
    if log.snapshots.len() < 2 {
        return Err(Error::domain("scattering_monitor needs at least two snapshots"));
    }
    let mut pulled: Vec<(f64, RadialField)> = Vec::with_capacity(log.snapshots.len());
    for (t, u) in &log.snapshots {
        pulled.push((*t, free_propagate(u, -*t, dt)?));
    }
    pulled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut increments = Vec::new();
    for pair in pulled.windows(2) {
        let (_, ref a) = pair[0];
        let (_, ref b) = pair[1];
        let diff = RadialField::new(
            a.grid().clone(),
            a.values().iter().zip(b.values()).map(|(x, y)| y - x).collect(),
        )?;
        increments.push(h1_norm(&diff)?);
    }
    let decreasing = increments.windows(2).all(|w| w[1] < w[0]);
    let final_increment = *increments.last().unwrap();
    let threshold = 1e-3 * log.initial_h1;
    Ok(ScatteringReport {
        checkpoint_times: pulled.iter().map(|(t, _)| *t).collect(),
        increments,
        decreasing,
        final_increment,
        threshold,
        scattering_flag: decreasing && final_increment < threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{nehari_lambda_star, report, scale_field};
    use num_complex::Complex64;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid(n: usize, r_max: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::new(n, r_max).unwrap())
    }

    #[test]
    fn cutoff_invariants_across_sweep() {
        let g = grid(4096, 400.0);
        for big_r in [8.0, 16.0, 32.0] {
            let c = CutoffProfile::new(&g, big_r).unwrap();
            // χ = r²/2 exactly on nodes up to R
            for (j, &r) in g.nodes().iter().enumerate() {
                if r <= big_r {
                    assert_eq!(c.chi[j], r * r / 2.0);
                } else if r >= 10.0 * big_r {
                    assert!((c.chi[j] - 5.0 * big_r * big_r).abs() < 1e-9 * big_r * big_r);
                    assert_eq!(c.chi_prime[j], 0.0);
                }
            }
            let m = c.max_discrete_second_derivative(&g);
            // 1 + 1e−12 in exact arithmetic; the second difference of r²/2
            // cancels catastrophically, so budget the fp roundoff explicitly
            let fp = 8.0 * f64::EPSILON * 5.0 * big_r * big_r / (g.dr() * g.dr());
            assert!(m <= 1.0 + 1e-12 + fp, "max chi'' = {m}");
        }
        assert!(CutoffProfile::new(&g, -1.0).is_err());
    }

    #[test]
    fn classify_small_and_scaled_fields() {
        let g = grid(1024, 16.0);
        let p = 5.0;
        let d_ref = 4.09; // order of the p = 5 ground-state level
        let tiny = RadialField::from_real_fn(g.clone(), |r| 0.1 * (-r * r / 2.0).exp()).unwrap();
        let c = classify(&tiny, p, d_ref).unwrap();
        assert_eq!(c.set_label, SetLabel::KPlus);
        assert!(c.s_value < d_ref && c.k_value > 0.0);

        // scaling the Gaussian past its Nehari point makes K < 0
        let u = RadialField::from_real_fn(g.clone(), |r| (-r * r / 2.0).exp()).unwrap();
        let ls = nehari_lambda_star(&report(&u, p).unwrap()).unwrap();
        let v = scale_field(&u, 1.05 * ls).unwrap();
        let cv = classify(&v, p, d_ref).unwrap();
        assert!(cv.k_value < 0.0);

        // S above the reference wins regardless of K
        let big = classify(&u, p, 0.5).unwrap();
        assert_eq!(big.set_label, SetLabel::AboveThreshold);
        assert!(classify(&u, p, -1.0).is_err());
    }

    #[test]
    fn virial_real_data_vanishes_exactly() {
        let g = grid(1024, 16.0);
        let u = RadialField::from_real_fn(g.clone(), |r| (-r * r / 2.0).exp()).unwrap();
        let c = CutoffProfile::new(&g, 16.0).unwrap();
        let v = virial_value(&u, &c).unwrap();
        assert!(v.abs() < 1e-12, "V = {v:e}");
    }

    #[test]
    fn virial_chirped_gaussian_closed_form() {
        // u = e^{−r²/2} e^{iβr²}: Im(ū u_r) = 2βr|u|², V = 4πβ∫r³e^{−r²}dr = 2πβ
        let g = grid(4096, 16.0);
        let beta = 0.25;
        let u = RadialField::from_fn(g.clone(), |r| {
            Complex64::from_polar((-r * r / 2.0).exp(), beta * r * r)
        })
        .unwrap();
        let c = CutoffProfile::new(&g, 16.0).unwrap();
        let v = virial_value(&u, &c).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-4, "V = {v}");
    }

    #[test]
    fn virial_linear_in_chirp() {
        // linearity of Im(ū u_r) in the phase gradient; small β keeps the
        // O(dr²β³) stencil term under the 1e−8 relative budget
        let g = grid(8192, 16.0);
        let c = CutoffProfile::new(&g, 16.0).unwrap();
        let v_of = |beta: f64| {
            let u = RadialField::from_fn(g.clone(), move |r| {
                Complex64::from_polar((-r * r / 2.0).exp(), beta * r * r)
            })
            .unwrap();
            virial_value(&u, &c).unwrap()
        };
        let v1 = v_of(0.01);
        let v2 = v_of(0.02);
        assert!((v2 - 2.0 * v1).abs() < 1e-8 * v2.abs(), "{v2} vs {}", 2.0 * v1);
    }

    #[test]
    fn virial_grid_mismatch_rejected() {
        let g1 = grid(256, 8.0);
        let g2 = grid(512, 8.0);
        let u = RadialField::zeros(g1);
        let c = CutoffProfile::new(&g2, 4.0).unwrap();
        assert!(virial_value(&u, &c).is_err());
    }
}
