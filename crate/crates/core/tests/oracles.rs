//! Independent numerical oracles: every tolerance here was fixed from a
//! closed form or a second, structurally different computation.

use std::sync::Arc;

use cssrad::evolution::{propagate, SimConfig, Termination};
use cssrad::grid::{lq_norm, RadialField, RadialGrid};
use cssrad::sampling::{sample_mixture, MixtureSpec};
use cssrad::{
    free_propagate, minimize_d, morawetz_check, nehari_lambda_star, report, scale_field,
    scattering_monitor, virial_rate_check, virial_value, CutoffProfile, DescentConfig,
};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn grid(n: usize, r_max: f64) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(n, r_max).unwrap())
}

/// Composite Simpson on g(r) = f(r)·r — an independent quadrature route.
fn simpson_radial(f: impl Fn(f64) -> f64, r_max: f64, intervals: usize) -> f64 {
    assert!(intervals % 2 == 0);
    let h = r_max / intervals as f64;
    let g = |r: f64| f(r) * r;
    let mut acc = g(0.0) + g(r_max);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(k as f64 * h);
    }
    2.0 * PI * acc * h / 3.0
}

#[test]
fn quadrature_agrees_with_simpson_oracle() {
    let g = grid(4096, 16.0);
    for (name, f, exact) in [
        ("gaussian density", Box::new(|r: f64| (-r * r).exp()) as Box<dyn Fn(f64) -> f64>, PI),
        ("r² gaussian", Box::new(|r: f64| r * r * (-r * r).exp()), PI),
    ] {
        let samples: Vec<f64> = g.nodes().iter().map(|&r| f(r)).collect();
        let ours = g.integrate_radial(&samples).unwrap();
        let simpson = simpson_radial(&f, 16.0, 1 << 15);
        assert!((ours - exact).abs() < 1e-8, "{name}: {ours} vs {exact}");
        assert!((ours - simpson).abs() < 1e-8, "{name}: {ours} vs simpson {simpson}");
    }
}

#[test]
fn gauge_identity_against_quadrature_oracle() {
    // ∫A₀|u|² = 2∫(A_θ/r)²|u|² computed by Simpson on the closed forms
    let q_simpson = simpson_radial(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let at = -(1.0 - (-r * r).exp()) / 4.0;
            (at / r).powi(2) * (-r * r).exp()
        },
        16.0,
        1 << 15,
    );
    let q_exact = PI / 16.0 * (4.0f64 / 3.0).ln();
    assert!((q_simpson - q_exact).abs() < 1e-10, "{q_simpson} vs {q_exact}");
}

#[test]
fn free_gaussian_at_t2() {
    let g = grid(2048, 64.0);
    let u0 = RadialField::from_real_fn(g.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    let t = 2.0;
    let ut = free_propagate(&u0, t, 1e-3).unwrap();
    let denom = Complex64::new(1.0, 2.0 * t);
    let diff = RadialField::new(
        g.clone(),
        ut.values()
            .iter()
            .zip(g.nodes())
            .map(|(v, &r)| v - (Complex64::new(-r * r / 2.0, 0.0) / denom).exp() / denom)
            .collect(),
    )
    .unwrap();
    let err = lq_norm(&diff, 2.0).unwrap();
    assert!(err < 1e-4, "L2 err at t=2: {err:e}");
}

/// One-off validation of the radial virial reduction against the full 2-D
/// definition with A₁, A₂ assembled from the closed-form A_θ of the Gaussian.
#[test]
fn virial_2d_reduction_oracle() {
    let beta = 0.25;
    let n2 = 384usize;
    let l = 10.0;
    let h = 2.0 * l / (n2 - 1) as f64;
    let coord = |i: usize| -l + i as f64 * h;
    let a_theta = |r: f64| -(1.0 - (-r * r).exp()) / 4.0;
    let u = |x: f64, y: f64| {
        let r2 = x * x + y * y;
        Complex64::from_polar((-r2 / 2.0).exp(), beta * r2)
    };
    // covariant derivatives with centered differences
    let mut v2d = 0.0;
    for i in 1..n2 - 1 {
        for j in 1..n2 - 1 {
            let (x, y) = (coord(i), coord(j));
            let r2 = x * x + y * y;
            if r2 == 0.0 {
                continue;
            }
            let uij = u(x, y);
            let dx = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
            let dy = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
            let at = a_theta(r2.sqrt());
            let a1 = y / r2 * at;
            let a2 = -x / r2 * at;
            let d1 = dx + Complex64::i() * a1 * uij;
            let d2 = dy + Complex64::i() * a2 * uij;
            // ∂χ = (x, y) inside the quadratic region of the cutoff
            v2d += (uij.conj() * (d1 * x + d2 * y)).im * h * h;
        }
    }
    let g = grid(4096, 16.0);
    let cutoff = CutoffProfile::new(&g, 16.0).unwrap();
    let ur = RadialField::from_fn(g.clone(), |r| {
        Complex64::from_polar((-r * r / 2.0).exp(), beta * r * r)
    })
    .unwrap();
    let v_rad = virial_value(&ur, &cutoff).unwrap();
    assert!(
        (v2d - v_rad).abs() / v_rad.abs() < 0.01,
        "2-D {v2d} vs radial {v_rad}"
    );
}

#[test]
fn virial_rate_linear_run() {
    // free flow: dV/dt tracks 2‖∇u‖² within 5% for R beyond the support
    let n = 2048;
    let g = grid(n, 64.0);
    let u0 = RadialField::from_real_fn(g.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    let cfg = SimConfig {
        p: 5.0,
        dt: 1e-3,
        t_end: 0.5,
        n,
        r_max: 64.0,
        nonlinear_on: false,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-6,
        log_stride: 25,
        virial_big_r: None,
        snapshot_times: vec![],
    };
    let log = propagate(&u0, &cfg).unwrap();
    let cutoff = CutoffProfile::new(&g, 64.0).unwrap();
    let rate = virial_rate_check(&log, &cutoff).unwrap();
    assert!(rate.max_rel_deviation < 0.05, "rel dev = {}", rate.max_rel_deviation);
    // too-short logs are a domain error
    let mut short = log.clone();
    short.times.truncate(2);
    short.virial.truncate(2);
    short.reports.truncate(2);
    assert!(virial_rate_check(&short, &cutoff).is_err());
}

/// Doubling the cutoff radius shrinks the dV/dt − 2K deviation by ≈ 2^σ
/// (within a factor 2). The datum carries a polynomial skirt so the cutoff
/// term dominates the stencil floor between R = 2 and R = 4.
#[test]
fn virial_rate_cutoff_scaling() {
    let n = 4096;
    let r_max = 128.0;
    let g = grid(n, r_max);
    let u0 = RadialField::from_real_fn(g.clone(), |r| {
        0.8 * (-r * r / 2.0).exp() + 0.05 * (1.0 + r * r).powf(-0.58)
    })
    .unwrap();
    let snaps: Vec<f64> = (0..=40).map(|k| k as f64 * 1e-3).collect();
    let cfg = SimConfig {
        p: 5.0,
        dt: 1e-3,
        t_end: 0.04,
        n,
        r_max,
        nonlinear_on: true,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 0.5,
        log_stride: 1,
        virial_big_r: None,
        snapshot_times: snaps,
    };
    let log = propagate(&u0, &cfg).unwrap();
    assert_eq!(log.termination, Termination::Completed);
    let dev_at = |big_r: f64| {
        let c = CutoffProfile::new(&g, big_r).unwrap();
        let vs: Vec<f64> =
            log.snapshots.iter().map(|(_, u)| virial_value(u, &c).unwrap()).collect();
        let mut max_dev: f64 = 0.0;
        for k in 1..vs.len() - 1 {
            let dvdt = (vs[k + 1] - vs[k - 1]) / (2.0 * cfg.dt);
            max_dev = max_dev.max((dvdt - 2.0 * log.reports[k].nehari).abs());
        }
        max_dev
    };
    let ratio = dev_at(2.0) / dev_at(4.0);
    assert!((2.0..=8.0).contains(&ratio), "deviation ratio = {ratio}");
}

#[test]
fn virial_rate_negative_on_blowup_run() {
    // 𝒦⁻ mechanism: dV/dt stays negative and grows in magnitude
    let n = 1024;
    let g = grid(n, 16.0);
    let u0 = RadialField::from_real_fn(g.clone(), |r| 2.0 * (-r * r / 2.0).exp()).unwrap();
    let cfg = SimConfig {
        p: 5.0,
        dt: 1e-3,
        t_end: 0.2,
        n,
        r_max: 16.0,
        nonlinear_on: true,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-3,
        log_stride: 10,
        virial_big_r: None,
        snapshot_times: vec![],
    };
    let log = propagate(&u0, &cfg).unwrap();
    assert_eq!(log.termination, Termination::BlowupDetected);
    let k0 = log.reports[0].nehari;
    assert!(k0 < 0.0);
    // slopes up to (not across) the detection row; the trigger state itself
    // is already past the resolution the monitor certifies
    let mut slopes = Vec::new();
    for k in 1..log.times.len() - 2 {
        slopes.push(
            (log.virial[k + 1] - log.virial[k - 1]) / (log.times[k + 1] - log.times[k - 1]),
        );
    }
    assert!(slopes.iter().all(|&s| s < 0.0), "slopes: {slopes:?}");
    // bounded away from zero at the 2K(0) scale
    assert!(slopes.iter().cloned().fold(0.0, f64::min) < k0, "{slopes:?} vs K0 = {k0}");
}

#[test]
fn random_kminus_members_bound_d_from_below() {
    // d = inf{L : K < 0}: members of 𝒦⁻ scaled just past their Nehari point
    // may not undercut d by more than 1%
    let g = grid(1024, 32.0);
    let cfg = DescentConfig { seed: 3, ..Default::default() };
    let d = minimize_d(5.0, &g, &cfg).unwrap().result.d_value;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let spec = MixtureSpec::even_real();
    let mut checked = 0;
    for _ in 0..12 {
        let u = sample_mixture(&g, &spec, &mut rng).unwrap();
        let rep = report(&u, 5.0).unwrap();
        if rep.p_norm <= 1e-12 {
            continue;
        }
        let ls = nehari_lambda_star(&rep).unwrap();
        let v = scale_field(&u, 1.001 * ls).unwrap();
        let rv = report(&v, 5.0).unwrap();
        if rv.nehari < 0.0 {
            assert!(
                rv.l_value >= d * (1.0 - 1e-2),
                "L = {} undercuts d = {d}",
                rv.l_value
            );
            checked += 1;
        }
    }
    assert!(checked >= 8, "only {checked} usable samples");
}

#[test]
fn scattering_monitor_linear_run_is_constant() {
    // pure linear flow: w(t) = e^{−itΔ}e^{itΔ}u₀ = u₀, increments ≈ 0
    let n = 1024;
    let g = grid(n, 32.0);
    let u0 = RadialField::from_real_fn(g.clone(), |r| 0.7 * (-r * r / 2.0).exp()).unwrap();
    let cfg = SimConfig {
        p: 5.0,
        dt: 1e-3,
        t_end: 1.0,
        n,
        r_max: 32.0,
        nonlinear_on: false,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-6,
        log_stride: 100,
        virial_big_r: None,
        snapshot_times: vec![0.25, 0.5, 0.75, 1.0],
    };
    let log = propagate(&u0, &cfg).unwrap();
    let rep = scattering_monitor(&log, cfg.dt).unwrap();
    for inc in &rep.increments {
        assert!(*inc < 1e-9, "increment {inc:e}");
    }
}

#[test]
fn scattering_monitor_refuses_blowup() {
    let n = 512;
    let g = grid(n, 16.0);
    let u0 = RadialField::from_real_fn(g.clone(), |r| 2.0 * (-r * r / 2.0).exp()).unwrap();
    let cfg = SimConfig {
        p: 5.0,
        dt: 1e-3,
        t_end: 1.0,
        n,
        r_max: 16.0,
        nonlinear_on: true,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-3,
        log_stride: 10,
        virial_big_r: None,
        snapshot_times: vec![0.05],
    };
    let log = propagate(&u0, &cfg).unwrap();
    assert_eq!(log.termination, Termination::BlowupDetected);
    assert!(scattering_monitor(&log, cfg.dt).is_err());
    assert!(morawetz_check(&log, 5.0, &[0.05]).is_err());
}
