//! Sweep the functional-inequality harness over randomized mixture fields
//! and report the empirical constants.
//!
//! ```bash
//! cargo run --release -p cssrad --example inequality_sweep
//! ```

use cssrad::grid::RadialGrid;
use cssrad::inequalities::{default_cases, recorded_constant, sweep_report};
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(2048, 32.0).unwrap());
    println!(
        "{:<18} {:>12} {:>12} {:>12} {:>10}",
        "case", "max ratio", "median", "recorded", "dilation"
    );
    for case in default_cases() {
        let rep = sweep_report(&case, &grid, 100, 2024).unwrap();
        let rec = recorded_constant(&case).unwrap_or(f64::NAN);
        let spread = if rep.dilation_spread.is_nan() {
            "-".to_string()
        } else {
            format!("{:.4}", rep.dilation_spread)
        };
        println!(
            "{:<18} {:>12.6} {:>12.6} {:>12.6} {:>10}",
            format!("{:?}", case.kind),
            rep.max_ratio,
            rep.median_ratio,
            rec,
            spread
        );
        assert!(rep.max_ratio <= rec * (1.0 + 1e-6), "violation in {:?}", case.kind);
    }
    println!("\nno sampled field violated a recorded constant");
    println!("(1/(4π) = {:.10} pins the A_theta corner case)", 1.0 / (4.0 * std::f64::consts::PI));
}
