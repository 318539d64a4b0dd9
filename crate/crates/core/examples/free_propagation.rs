//! Linear propagator against the closed-form Gaussian solution, plus exact
//! reversibility of the Crank–Nicolson step.
//!
//! ```bash
//! cargo run --release -p cssrad --example free_propagation
//! ```

use cssrad::grid::{lq_norm, RadialField, RadialGrid};
use cssrad::free_propagate;
use num_complex::Complex64;
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(2048, 64.0).unwrap());
    let u0 = RadialField::from_real_fn(grid.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    let dt = 1e-3;

    for t in [0.5, 1.0, 2.0] {
        let ut = free_propagate(&u0, t, dt).unwrap();
        // e^{itΔ} e^{−r²/2} = (1 + 2it)^{−1} e^{−r²/(2(1+2it))}
        let denom = Complex64::new(1.0, 2.0 * t);
        let diff = RadialField::new(
            grid.clone(),
            ut.values()
                .iter()
                .zip(grid.nodes())
                .map(|(v, &r)| v - (Complex64::new(-r * r / 2.0, 0.0) / denom).exp() / denom)
                .collect(),
        )
        .unwrap();
        println!("t = {t}: L2 error vs closed form = {:.3e}", lq_norm(&diff, 2.0).unwrap());
    }

    // forward then backward returns the initial state to solver roundoff
    let fwd = free_propagate(&u0, 1.0, dt).unwrap();
    let back = free_propagate(&fwd, -1.0, dt).unwrap();
    let diff = RadialField::new(
        grid.clone(),
        back.values().iter().zip(u0.values()).map(|(a, b)| a - b).collect(),
    )
    .unwrap();
    println!("|e^(-itΔ) e^(itΔ) u - u|_2  = {:.3e}", lq_norm(&diff, 2.0).unwrap());
}
