//! Two independent routes to the limiting correlator Y(x,t): the marching
//! Volterra solver and the closed-form double integral, plus recovery of the
//! characteristic-function derivative Z′(x) = −xVZ(x) from the solution.
//!
//! Run: cargo run --release --example volterra_routes

use rmt_lab::charflow::{
    closed_form_y, semicircle_volterra_kernel, solve_volterra, wigner_forcing_grid,
    z_derivative_from_y, DEFAULT_GRID_HORIZON, DEFAULT_GRID_STEP,
};
use rmt_lab::testfns::TestFunction;
use rmt_lab::variance::{kappa4_constant_b, variance_goe, variance_wigner};

fn main() -> rmt_lab::Result<()> {
    let w = 1.0;
    let phi = TestFunction::poisson(0.0, 1.0)?;
    let h = DEFAULT_GRID_STEP;

    // Route comparison on t ∈ [0, 5] at x = 1, Z = 1.
    let q = semicircle_volterra_kernel(w, h, 5.0)?;
    let r = wigner_forcing_grid(&phi, w, 1.0, 1.0, 0.0, 0.0, h, 5.0)?;
    let y = solve_volterra(&q, &r)?;
    let mut sup = 0.0f64;
    for (k, yv) in y.values().iter().enumerate() {
        let closed = closed_form_y(1.0, k as f64 * h, &phi, w, 1.0, 128)?;
        sup = sup.max((yv - closed).norm());
    }
    println!("marching vs closed-form Y: sup difference on [0,5] = {sup:.3e}");

    // Z′ recovery at the limiting Z for the GOE kernel.
    let v_goe = variance_goe(&phi, w, 128)?.total;
    let x = 1.0;
    let z = (-x * x * v_goe / 2.0).exp();
    let q = semicircle_volterra_kernel(w, h, DEFAULT_GRID_HORIZON)?;
    let r = wigner_forcing_grid(&phi, w, x, z, 0.0, 0.0, h, DEFAULT_GRID_HORIZON)?;
    let y = solve_volterra(&q, &r)?;
    let z_prime = z_derivative_from_y(&phi, &y)?;
    println!(
        "GOE kernel:    Z'(1) = {z_prime:.6}, −xVZ = {:.6}  (V_GOE = {v_goe:.6})",
        -x * v_goe * z
    );

    // Adding the iκ₄BI(t) forcing shifts the recovered variance to V_Wig.
    let kappa4 = -6.0 / 5.0;
    let b = kappa4_constant_b(&phi, w, 128)?;
    let v_wig = variance_wigner(&phi, w, kappa4, 128)?.total;
    let z = (-x * x * v_wig / 2.0).exp();
    let r = wigner_forcing_grid(&phi, w, x, z, kappa4, b, h, DEFAULT_GRID_HORIZON)?;
    let y = solve_volterra(&q, &r)?;
    let z_prime = z_derivative_from_y(&phi, &y)?;
    println!(
        "κ₄ forcing:    Z'(1) = {z_prime:.6}, −xVZ = {:.6}  (V_Wig = {v_wig:.6})",
        -x * v_wig * z
    );
    Ok(())
}
