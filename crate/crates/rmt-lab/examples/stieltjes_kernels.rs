//! Closed-form Stieltjes transforms, their self-consistency residuals, and
//! the Fourier-side kernel identities v(t) = J₁(2wt)/(wt), T₁(t) = −J₀(2wt),
//! A_κ₄(0) = c.
//!
//! Run: cargo run --release --example stieltjes_kernels

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmt_lab::laws::{
    a_kappa4_kernel, bessel_j0, bessel_j1, resolvent_kernel_t1_quadrature,
    self_consistency_residual, stieltjes_limit, v_kernel, LimitLaw,
};

fn main() -> rmt_lab::Result<()> {
    let scl = LimitLaw::semicircle(1.0)?;
    let mp = LimitLaw::marchenko_pastur(1.0, 2.0)?;

    let f_i = stieltjes_limit(&scl, Complex64::new(0.0, 1.0))?;
    println!("semicircle f(i)       = {:.10}i  (golden-ratio value (√5−1)/2)", f_i.im);
    let f_mp = stieltjes_limit(&mp, Complex64::new(1.0, 1.0))?;
    println!("MP (c=2) f(1+i)       = {:.6}{:+.6}i", f_mp.re, f_mp.im);

    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z = Complex64::new(
            10.0 * rng.random::<f64>() - 5.0,
            (0.1 + 2.9 * rng.random::<f64>()) * if rng.random::<bool>() { 1.0 } else { -1.0 },
        );
        for law in [&scl, &mp] {
            worst = worst.max(self_consistency_residual(law, z)? / (1.0 + z.norm()));
        }
    }
    println!("worst self-consistency residual over 100 random z: {worst:.2e}");

    let mut worst_v = 0.0f64;
    let mut worst_t1 = 0.0f64;
    for i in 0..=100 {
        let t = 0.1 * i as f64;
        let v = v_kernel(&scl, t)?;
        let v_bessel = if t == 0.0 { 1.0 } else { bessel_j1(2.0 * t) / t };
        worst_v = worst_v.max((v - v_bessel).norm());
        worst_t1 =
            worst_t1.max((resolvent_kernel_t1_quadrature(t, 1.0)? + bessel_j0(2.0 * t)).abs());
    }
    println!("sup |v(t) − J₁(2t)/t| on [0,10]:  {worst_v:.2e}");
    println!("sup |T₁(t) + J₀(2t)| on [0,10]:   {worst_t1:.2e}");

    let a4 = a_kappa4_kernel(0.0, 1.0, 2.0)?;
    println!("A_κ₄(0) at a = 1, c = 2: {:.10} (expect c = 2)", a4.re);
    Ok(())
}
