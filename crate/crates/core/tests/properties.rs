//! Property tests over randomized Gaussian-mixture fields.

use std::sync::Arc;

use cssrad::evolution::StrangStepper;
use cssrad::grid::{grad_kinetic, lq_norm, RadialField, RadialGrid};
use cssrad::{a_theta_of, a_zero_of, conserved_mass, project_to_nehari, report};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn grid(n: usize, r_max: f64) -> Arc<RadialGrid> {
    Arc::new(RadialGrid::new(n, r_max).unwrap())
}

/// Smooth even mixture from proptest-drawn parameters.
fn mixture(g: &Arc<RadialGrid>, amps: &[f64], widths: &[f64], chirp: f64) -> RadialField {
    let parts: Vec<(f64, f64)> =
        amps.iter().zip(widths).map(|(&a, &w)| (a, w)).collect();
    RadialField::from_fn(g.clone(), move |r| {
        let v: f64 = parts.iter().map(|&(a, w)| a * (-r * r / (2.0 * w * w)).exp()).sum();
        Complex64::from_polar(v, chirp * r * r)
    })
    .unwrap()
}

fn params() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, f64)> {
    (
        prop::collection::vec(0.05f64..1.2, 2..4),
        prop::collection::vec(0.5f64..3.0, 4),
        -0.4f64..0.4,
    )
        .prop_map(|(a, w, c)| {
            let k = a.len();
            (a, w[..k].to_vec(), c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Quadrature linearity to 1e−12 relative.
    #[test]
    fn integrate_is_linear((a, w, _) in params(), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let g = grid(512, 24.0);
        let f1: Vec<f64> = g.nodes().iter().map(|&r| (-r * r / (2.0 * w[0] * w[0])).exp() * a[0]).collect();
        let f2: Vec<f64> = g.nodes().iter().map(|&r| (1.0 + r).recip()).collect();
        let comb: Vec<f64> = f1.iter().zip(&f2).map(|(x, y)| c1 * x + c2 * y).collect();
        let lhs = g.integrate_radial(&comb).unwrap();
        let rhs = c1 * g.integrate_radial(&f1).unwrap() + c2 * g.integrate_radial(&f2).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    /// Sign, monotonicity, and tail structure of the gauge potentials.
    #[test]
    fn gauge_type_invariants((a, w, _) in params()) {
        let g = grid(1024, 24.0);
        let u = mixture(&g, &a, &w, 0.0);
        let density = u.density();
        let at = a_theta_of(&density, &g).unwrap();
        let a0 = a_zero_of(&density, &at, &g).unwrap();
        let mass = g.integrate_radial(&density).unwrap();
        let tol = 1e-10 * mass.max(1.0);
        prop_assert_eq!(at[0], 0.0);
        prop_assert!(at.windows(2).all(|p| p[1] <= p[0] + tol), "A_theta not nonincreasing");
        prop_assert!(at.iter().all(|&x| x >= -mass / (4.0 * PI) - tol));
        prop_assert!(a0.iter().all(|&x| x >= -tol));
        prop_assert!(a0.windows(2).all(|p| p[1] <= p[0] + tol), "A_0 not nonincreasing");
        prop_assert_eq!(a0[g.n() - 1], 0.0);
        // global identity ∫A₀|u|² = 2∫(A_θ/r)²|u|²
        let q: f64 = (1..g.n())
            .map(|j| g.quad_weights()[j] * (at[j] / g.node(j)).powi(2) * density[j])
            .sum();
        let ia0: f64 =
            (0..g.n()).map(|j| g.quad_weights()[j] * a0[j] * density[j]).sum();
        if ia0 > 1e-12 {
            prop_assert!((ia0 - 2.0 * q).abs() / ia0 < 1e-6, "identity: {} vs {}", ia0, 2.0 * q);
        }
    }

    /// L = S − K/2 equals M/2 + (p−3)/(2(p+1))‖u‖_{p+1}^{p+1} to 1e−10.
    #[test]
    fn l_identity_random_fields((a, w, c) in params(), p in 3.2f64..6.0) {
        let g = grid(512, 24.0);
        let u = mixture(&g, &a, &w, c);
        let rep = report(&u, p).unwrap();
        let direct = rep.mass / 2.0 + (p - 3.0) / (2.0 * (p + 1.0)) * rep.p_norm;
        prop_assert!((rep.l_value - direct).abs() <= 1e-10 * rep.l_value.abs().max(1.0));
        prop_assert!((rep.action - rep.energy - rep.mass / 2.0).abs() <= 1e-12 * rep.action.abs().max(1.0));
    }

    /// Diamagnetic consistency: ‖∇|u|‖² ≤ ‖∇u‖² + Q up to stencil error.
    #[test]
    fn diamagnetic_random_chirped((a, w, c) in params()) {
        let g = grid(1024, 24.0);
        let u = mixture(&g, &a, &w, c);
        let rep = report(&u, 5.0).unwrap();
        let modulus = RadialField::new(
            g.clone(),
            u.values().iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
        ).unwrap();
        let lhs = grad_kinetic(&modulus).unwrap();
        let dr2 = g.dr() * g.dr();
        prop_assert!(lhs <= rep.covariant_kinetic() + 10.0 * dr2, "{} vs {}", lhs, rep.covariant_kinetic());
    }

    /// The Nehari projection lands on the discrete manifold.
    #[test]
    fn projection_reaches_manifold((a, w, _) in params(), p in 3.5f64..5.5) {
        let g = grid(512, 24.0);
        let u = mixture(&g, &a, &w, 0.0);
        if report(&u, p).unwrap().p_norm > 1e-10 {
            let (_, lambda, rep) = project_to_nehari(&u, p).unwrap();
            prop_assert!(lambda > 0.0);
            prop_assert!(rep.nehari.abs() <= 1e-10 * rep.covariant_kinetic().max(1e-300));
        }
    }

    /// Mass invariance of the scaling map under resampling.
    #[test]
    fn scaling_preserves_mass((a, w, _) in params(), lambda in 0.6f64..1.8) {
        let g = grid(4096, 32.0);
        let u = mixture(&g, &a, &w, 0.0);
        let m0 = lq_norm(&u, 2.0).unwrap().powi(2);
        if m0 > 1e-10 {
            let v = cssrad::scale_field(&u, lambda).unwrap();
            let m1 = lq_norm(&v, 2.0).unwrap().powi(2);
            prop_assert!((m1 - m0).abs() / m0 < 1e-4, "λ={}: {} vs {}", lambda, m1, m0);
        }
    }

    /// The full Strang step conserves the discrete mass exactly and the
    /// linear step is exactly reversible.
    #[test]
    fn step_conserves_and_reverses((a, w, c) in params(), dt in 5e-4f64..5e-3) {
        let g = grid(512, 24.0);
        let u = mixture(&g, &a, &w, c);
        let m0 = conserved_mass(&u);
        if m0 > 1e-12 {
            let mut stepper = StrangStepper::new(g.clone(), dt, 5.0).unwrap();
            let mut vals = u.values().to_vec();
            vals[g.n() - 1] = Complex64::new(0.0, 0.0);
            let before = vals.clone();
            let m_start: f64 = conserved_mass(&RadialField::new(g.clone(), vals.clone()).unwrap());
            for _ in 0..5 {
                stepper.step(&mut vals, true).unwrap();
            }
            let after = RadialField::new(g.clone(), vals.clone()).unwrap();
            prop_assert!((conserved_mass(&after) - m_start).abs() <= 1e-11 * m_start);
            // linear reversibility
            let mut fwd = before.clone();
            stepper.linear_step(&mut fwd);
            stepper.linear_step_back(&mut fwd);
            let err: f64 = fwd.iter().zip(&before).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10, "reversal err {:e}", err);
        }
    }
}
