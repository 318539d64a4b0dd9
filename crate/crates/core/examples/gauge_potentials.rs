//! Evaluate the nonlocal gauge potentials for a Gaussian and compare with
//! their closed forms.
//!
//! ```bash
//! cargo run --release -p cssrad --example gauge_potentials
//! ```

use cssrad::grid::{RadialField, RadialGrid};
use cssrad::gauge_from_field;
use std::f64::consts::PI;
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(4096, 16.0).unwrap());
    let u = RadialField::from_real_fn(grid.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    let pots = gauge_from_field(&u).unwrap();

    // A_θ(r) = −(1 − e^{−r²})/4 for the unit Gaussian density
    let mut max_err: f64 = 0.0;
    for (j, &r) in grid.nodes().iter().enumerate() {
        let exact = -(1.0 - (-r * r).exp()) / 4.0;
        max_err = max_err.max((pots.a_theta[j] - exact).abs());
    }
    println!("max |A_theta - closed form|  = {max_err:.3e}");

    let d = u.density();
    let q_samples: Vec<f64> =
        pots.a_theta_over_r.iter().zip(&d).map(|(a, f)| a * a * f).collect();
    let a0_samples: Vec<f64> = pots.a_zero.iter().zip(&d).map(|(a, f)| a * f).collect();
    let q = grid.integrate_radial(&q_samples).unwrap();
    let ia0 = grid.integrate_radial(&a0_samples).unwrap();
    let q_exact = PI / 16.0 * (4.0f64 / 3.0).ln();

    println!("Q = int (A_theta/r)^2 |u|^2  = {q:.10}  (closed form {q_exact:.10})");
    println!("int A_0 |u|^2                = {ia0:.10}  (= 2Q, closed form {:.10})", 2.0 * q_exact);
    println!("sup |A_theta|                = {:.10}  (M/4pi = {:.10})",
        pots.a_theta.iter().fold(0.0f64, |m, &x| m.max(x.abs())),
        grid.integrate_radial(&d).unwrap() / (4.0 * PI));
}
