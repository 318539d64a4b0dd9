//! Finite-time blow-up of 𝒦⁻ data: gradient growth trips the detector in
//! well under a unit of time, for p = 5 and for p = 4.5.
//!
//! ```bash
//! cargo run --release -p cssrad --example blowup_detection
//! ```

use cssrad::evolution::{propagate, SimConfig};
use cssrad::grid::{RadialField, RadialGrid};
use std::sync::Arc;

fn main() {
    let n = 2048;
    let r_max = 32.0;
    let grid = Arc::new(RadialGrid::new(n, r_max).unwrap());
    for (p, amplitude) in [(5.0, 2.0), (4.5, 2.2)] {
        let u0 = RadialField::from_real_fn(grid.clone(), move |r| {
            amplitude * (-r * r / 2.0).exp()
        })
        .unwrap();
        let cfg = SimConfig {
            p,
            dt: 1e-3,
            t_end: 5.0,
            n,
            r_max,
            nonlinear_on: true,
            blowup_gradient_factor: 10.0,
            boundary_mass_tol: 1e-8,
            log_stride: 10,
            virial_big_r: None,
            snapshot_times: vec![],
        };
        let log = propagate(&u0, &cfg).unwrap();
        let rep0 = &log.reports[0];
        println!(
            "p = {p}, A = {amplitude}: S = {:.4}, K = {:.4} -> {:?} at t = {:?} \
             (grad norm {:.1} -> {:.1})",
            rep0.action,
            rep0.nehari,
            log.termination,
            log.trigger_time,
            log.grad_norm[0],
            log.grad_norm.last().unwrap()
        );
    }
}
