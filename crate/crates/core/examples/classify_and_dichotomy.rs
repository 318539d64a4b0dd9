//! Classify an amplitude ladder against the threshold and run the dichotomy
//! experiment: 𝒦⁻ data blow up, 𝒦⁺ data disperse.
//!
//! ```bash
//! cargo run --release -p cssrad --example classify_and_dichotomy
//! ```

use cssrad::evolution::{propagate, SimConfig, Termination};
use cssrad::grid::{RadialField, RadialGrid};
use cssrad::{classify, SetLabel};
use std::sync::Arc;

fn main() {
    let d_reference = 4.0900; // p = 5 threshold from the ground-state solver
    let n = 2048;
    let r_max = 32.0;
    let grid = Arc::new(RadialGrid::new(n, r_max).unwrap());
    let p = 5.0;

    println!("{:>9} {:>10} {:>10} {:>16} {:>22}", "amplitude", "S", "K", "label", "outcome");
    for a in [0.1, 0.5, 1.1, 1.6, 2.0] {
        let u0 =
            RadialField::from_real_fn(grid.clone(), move |r| a * (-r * r / 2.0).exp()).unwrap();
        let c = classify(&u0, p, d_reference).unwrap();
        let outcome = if c.set_label == SetLabel::OnBoundary {
            "skipped (boundary)".to_string()
        } else {
            let cfg = SimConfig {
                p,
                dt: 1e-3,
                t_end: 3.0,
                n,
                r_max,
                nonlinear_on: true,
                blowup_gradient_factor: 10.0,
                boundary_mass_tol: 1e-4,
                log_stride: 100,
                virial_big_r: None,
                snapshot_times: vec![],
            };
            let log = propagate(&u0, &cfg).unwrap();
            match log.termination {
                Termination::BlowupDetected => {
                    format!("blow-up at t = {:.3}", log.trigger_time.unwrap())
                }
                Termination::Completed => format!("global through t = {}", cfg.t_end),
                Termination::BoundaryContaminated => "boundary contaminated".to_string(),
            }
        };
        println!(
            "{:>9.2} {:>10.4} {:>10.4} {:>16} {:>22}",
            a,
            c.s_value,
            c.k_value,
            format!("{:?}", c.set_label),
            outcome
        );
    }
}
