//! The four limiting variance formulas evaluated by singular-weight
//! quadrature, for a spread of test functions.
//!
//! Run: cargo run --release --example variance_formulas

use rmt_lab::testfns::TestFunction;
use rmt_lab::variance::{
    kappa4_constant_b, variance_goe, variance_sample_covariance, variance_wigner,
    variance_wishart,
};

fn main() -> rmt_lab::Result<()> {
    let order = 128;
    let kappa4_uniform = -6.0 / 5.0;
    let fns = [
        TestFunction::monomial(1),
        TestFunction::monomial(2),
        TestFunction::poisson(0.0, 1.0)?,
        TestFunction::gauss_bump(0.0, 1.0)?,
    ];

    println!("Wigner-family variances (w² = 1, uniform-entry κ₄ = −6/5):");
    println!(
        "{:<18} {:>12} {:>12} {:>12} {:>10}",
        "phi", "V_GOE", "V_Wig", "kappa4_part", "B"
    );
    for phi in &fns {
        let goe = variance_goe(phi, 1.0, order)?;
        let wig = variance_wigner(phi, 1.0, kappa4_uniform, order)?;
        let b = kappa4_constant_b(phi, 1.0, order)?;
        println!(
            "{:<18} {:>12.6} {:>12.6} {:>12.6} {:>10.6}",
            phi.name(),
            goe.total,
            wig.total,
            wig.kappa4_part,
            b
        );
    }

    println!("\nCovariance-family variances (a² = 1, c = 2):");
    println!(
        "{:<18} {:>12} {:>12} {:>12}",
        "phi", "V_Wish", "V_SC", "kappa4_part"
    );
    for phi in &fns {
        let wish = variance_wishart(phi, 1.0, 2.0, order)?;
        let sc = variance_sample_covariance(phi, 1.0, 2.0, kappa4_uniform, order)?;
        println!(
            "{:<18} {:>12.6} {:>12.6} {:>12.6}",
            phi.name(),
            wish.total,
            sc.total,
            sc.kappa4_part
        );
    }

    println!("\nScale covariance: V_GOE is invariant under (φ(λ), w) → (φ(sλ), w/s):");
    let phi = TestFunction::gauss_bump(0.0, 1.0)?;
    let v1 = variance_goe(&phi, 1.0, order)?.total;
    let v2 = variance_goe(&phi.dilated(2.0)?, 0.5, order)?.total;
    println!("  s = 2: {v1:.12} vs {v2:.12}");
    Ok(())
}
