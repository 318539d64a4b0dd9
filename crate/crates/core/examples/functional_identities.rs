//! The conserved functionals of a Gaussian at p = 5, the explicit Nehari
//! projection, and the scaling identities.
//!
//! ```bash
//! cargo run --release -p cssrad --example functional_identities
//! ```

use cssrad::grid::{RadialField, RadialGrid};
use cssrad::{nehari_lambda_star, project_to_nehari, report, scale_field};
use std::sync::Arc;

fn main() {
    let grid = Arc::new(RadialGrid::new(4096, 16.0).unwrap());
    let u = RadialField::from_real_fn(grid.clone(), |r| (-r * r / 2.0).exp()).unwrap();
    let p = 5.0;
    let rep = report(&u, p).unwrap();

    println!("M  = {:.8}", rep.mass);
    println!("E  = {:.8}", rep.energy);
    println!("S  = {:.8}", rep.action);
    println!("K  = {:.8}", rep.nehari);
    println!("Q  = {:.8}", rep.q_charge);
    println!("L  = {:.8}   (M/2 + (p-3)/(2(p+1))·|u|_{{p+1}}^{{p+1}} = {:.8})",
        rep.l_value,
        rep.mass / 2.0 + (p - 3.0) / (2.0 * (p + 1.0)) * rep.p_norm);

    // dS(u_λ)/dλ at λ = 1 equals K(u)
    let eps = 1e-4;
    let sp = report(&scale_field(&u, 1.0 + eps).unwrap(), p).unwrap().action;
    let sm = report(&scale_field(&u, 1.0 - eps).unwrap(), p).unwrap().action;
    println!("dS/dλ|₁ = {:.8}  vs  K = {:.8}", (sp - sm) / (2.0 * eps), rep.nehari);

    // explicit Nehari projection
    let lam = nehari_lambda_star(&rep).unwrap();
    let (_, lam_refined, proj) = project_to_nehari(&u, p).unwrap();
    println!("λ* (closed form)   = {lam:.8}");
    println!("λ  (secant-refined) = {lam_refined:.8}");
    println!("S(u_λ*) = {:.8} with K residual {:.2e}", proj.action,
        proj.nehari.abs() / proj.covariant_kinetic());
    println!("on-manifold check   = {:.8}",
        (p - 3.0) / (2.0 * (p - 1.0)) * proj.covariant_kinetic() + proj.mass / 2.0);
}
