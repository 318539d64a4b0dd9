//! The localized virial quantity and the Morawetz accumulator ladder.
//!
//! ```bash
//! cargo run --release -p cssrad --example virial_morawetz
//! ```

use cssrad::evolution::{propagate, SimConfig};
use cssrad::grid::{RadialField, RadialGrid};
use cssrad::{morawetz_check, virial_rate_check, virial_value, CutoffProfile};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

fn main() {
    // pointwise virial values
    let g = Arc::new(RadialGrid::new(4096, 16.0).unwrap());
    let cutoff = CutoffProfile::new(&g, 16.0).unwrap();
    let real = RadialField::from_real_fn(g.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    println!("V[real gaussian]    = {:.2e}  (Im of a real integrand)", virial_value(&real, &cutoff).unwrap());
    let chirped = RadialField::from_fn(g.clone(), |r| {
        Complex64::from_polar((-r * r / 2.0).exp(), 0.25 * r * r)
    })
    .unwrap();
    println!(
        "V[chirped gaussian] = {:.8}  (closed form pi/2 = {:.8})",
        virial_value(&chirped, &cutoff).unwrap(),
        PI / 2.0
    );

    // Morawetz ladder on a small K+ run
    let n = 2048;
    let r_max = 128.0;
    let grid = Arc::new(RadialGrid::new(n, r_max).unwrap());
    let u0 = RadialField::from_real_fn(grid.clone(), |r| 0.5 * (-r * r / 4.5).exp()).unwrap();
    let cfg = SimConfig {
        p: 5.0,
        dt: 2e-3,
        t_end: 25.0,
        n,
        r_max,
        nonlinear_on: true,
        blowup_gradient_factor: 10.0,
        boundary_mass_tol: 1e-4,
        log_stride: 50,
        virial_big_r: None,
        snapshot_times: vec![],
    };
    let log = propagate(&u0, &cfg).unwrap();
    let big = CutoffProfile::new(&grid, r_max).unwrap();
    let rate = virial_rate_check(&log, &big).unwrap();
    println!(
        "dV/dt vs 2K: max relative deviation = {:.3} over the run",
        rate.max_rel_deviation
    );
    let mora = morawetz_check(&log, 5.0, &[5.0, 10.0, 15.0, 20.0, 25.0]).unwrap();
    println!("Morawetz ladder (alpha = {:.4}):", mora.alpha);
    for ((t, acc), ratio) in mora.horizons.iter().zip(&mora.accumulators).zip(&mora.ratios) {
        println!("  T = {t:>4}: accumulator = {acc:.6e}, accumulator/T^alpha = {ratio:.6e}");
    }
    println!(
        "ratio max/min = {:.3} (bounded: {}), A0-vs-2Q accumulator identity err = {:.2e}",
        mora.max_over_min_ratio, mora.bounded, mora.identity_max_rel_err
    );
}
