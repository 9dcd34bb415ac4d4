//! The limiting objects: semicircle and Marchenko–Pastur laws, their closed
//! Stieltjes transforms `f(z) = ∫ dN(λ)/(λ−z)`, and the Fourier-side kernels
//!
//! ```text
//! v(t)      = ∫ e^{itλ} dN(λ)                 (trace-exponential limit)
//! (v*v)(t)  = −(i/2πw⁴) ∫ e^{itμ} μ √(4w²−μ²) dμ
//! T₁(t)     = −(1/π) ∫ e^{iλt} dλ/√(4w²−λ²) = −J₀(2wt)
//! A_κ₄(t)   = (1/2πa⁴) ∫ e^{iμt} √(4a⁴c−(μ−a_m)²) dμ
//! ```
//!
//! The square-root edge weight is removed by the substitution
//! λ = center + radius·cos θ, which turns every kernel into a smooth
//! Gauss–Chebyshev sum with spectral accuracy.

use crate::error::{Error, Result};
use crate::variance::{chebyshev_weighted_integral, chebyshev_weighted_integral_complex};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Quadrature order used by the kernel evaluations. Convergence for the
/// oscillatory integrands requires order ≳ radius·|t|; 256 covers every use
/// in the crate with a wide margin.
const KERNEL_ORDER: usize = 256;

/// A limiting spectral law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitLaw {
    /// Semicircle law with off-diagonal entry variance w².
    Semicircle { w2: f64 },
    /// Marchenko–Pastur law with entry variance a² and aspect ratio c = m/n.
    MarchenkoPastur { a2: f64, c: f64 },
}

impl LimitLaw {
    pub fn semicircle(w2: f64) -> Result<Self> {
        if !(w2 > 0.0) {
            return Err(Error::argument("w2 must be positive"));
        }
        Ok(LimitLaw::Semicircle { w2 })
    }

    pub fn marchenko_pastur(a2: f64, c: f64) -> Result<Self> {
        if !(a2 > 0.0) {
            return Err(Error::argument("a2 must be positive"));
        }
        if !(c > 0.0) {
            return Err(Error::argument("c must be positive"));
        }
        Ok(LimitLaw::MarchenkoPastur { a2, c })
    }

    /// Support of the continuous part, [lower, upper].
    pub fn support(&self) -> (f64, f64) {
        match *self {
            LimitLaw::Semicircle { w2 } => {
                let w = w2.sqrt();
                (-2.0 * w, 2.0 * w)
            }
            LimitLaw::MarchenkoPastur { a2, c } => {
                let rc = c.sqrt();
                (a2 * (1.0 - rc) * (1.0 - rc), a2 * (1.0 + rc) * (1.0 + rc))
            }
        }
    }

    /// Center and radius of the support interval.
    pub fn center_radius(&self) -> (f64, f64) {
        match *self {
            LimitLaw::Semicircle { w2 } => (0.0, 2.0 * w2.sqrt()),
            LimitLaw::MarchenkoPastur { a2, c } => (a2 * (c + 1.0), 2.0 * a2 * c.sqrt()),
        }
    }

    /// Point mass at zero: (1−c)₊ for Marchenko–Pastur, zero otherwise.
    pub fn atom_mass(&self) -> f64 {
        match *self {
            LimitLaw::Semicircle { .. } => 0.0,
            LimitLaw::MarchenkoPastur { c, .. } => (1.0 - c).max(0.0),
        }
    }

    /// Mass of the continuous part.
    pub fn continuous_mass(&self) -> f64 {
        1.0 - self.atom_mass()
    }
}

/// Pointwise density of the continuous part; zero outside the support.
pub fn density(law: &LimitLaw, lambda: f64) -> f64 {
    match *law {
        LimitLaw::Semicircle { w2 } => {
            let disc = 4.0 * w2 - lambda * lambda;
            if disc <= 0.0 {
                0.0
            } else {
                disc.sqrt() / (2.0 * PI * w2)
            }
        }
        LimitLaw::MarchenkoPastur { a2, c } => {
            let am = a2 * (c + 1.0);
            let disc = 4.0 * a2 * a2 * c - (lambda - am) * (lambda - am);
            if disc <= 0.0 || lambda <= 0.0 {
                0.0
            } else {
                disc.sqrt() / (2.0 * PI * a2 * lambda)
            }
        }
    }
}

/// Closed-form Stieltjes transform of the law (atom included) for Im z ≠ 0.
///
/// The square-root branches are pinned by their asymptotics:
/// √(z²−4w²) = z + O(z⁻¹) and √((z−a_m)²−4a⁴c) = z + O(1).
pub fn stieltjes_limit(law: &LimitLaw, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::argument("stieltjes transform requires Im z ≠ 0"));
    }
    match *law {
        LimitLaw::Semicircle { w2 } => {
            let s = asymptotic_sqrt(z, 4.0 * w2);
            Ok((s - z) / (2.0 * w2))
        }
        LimitLaw::MarchenkoPastur { a2, c } => {
            let am = a2 * (c + 1.0);
            let s = asymptotic_sqrt(z - am, 4.0 * a2 * a2 * c);
            Ok((s - (z + a2 * (1.0 - c))) / (2.0 * a2 * z))
        }
    }
}

/// √(ζ² − r²) with the branch that behaves like ζ at infinity, evaluated as
/// ζ·√(1 − r²/ζ²). Off the real axis 1 − r²/ζ² never crosses the principal
/// branch cut, so this is the analytic branch on each half-plane.
fn asymptotic_sqrt(zeta: Complex64, r_squared: f64) -> Complex64 {
    zeta * (Complex64::new(1.0, 0.0) - r_squared / (zeta * zeta)).sqrt()
}

/// Residual of the self-consistent (quadratic) equation at the closed-form
/// transform value: |zf + 1 + w²f²| for the semicircle,
/// |za²f² + (z + a²(1−c))f + 1| for Marchenko–Pastur.
pub fn self_consistency_residual(law: &LimitLaw, z: Complex64) -> Result<f64> {
    let f = stieltjes_limit(law, z)?;
    let res = match *law {
        LimitLaw::Semicircle { w2 } => z * f + 1.0 + w2 * f * f,
        LimitLaw::MarchenkoPastur { a2, c } => {
            z * a2 * f * f + (z + a2 * (1.0 - c)) * f + 1.0
        }
    };
    Ok(res.norm())
}

/// Fourier transform of the law's continuous part, v(t) = ∫ e^{itλ} dN(λ),
/// by edge-regularized quadrature. For Marchenko–Pastur the aspect ratio must
/// satisfy c ≥ 1 (continuous mass one).
pub fn v_kernel(law: &LimitLaw, t: f64) -> Result<Complex64> {
    let (center, radius) = law.center_radius();
    match *law {
        LimitLaw::Semicircle { w2 } => {
            let int = chebyshev_weighted_integral_complex(
                |lam| {
                    Complex64::from_polar(1.0, t * lam) * (4.0 * w2 - lam * lam)
                },
                center,
                radius,
                KERNEL_ORDER,
            )?;
            Ok(int / (2.0 * PI * w2))
        }
        LimitLaw::MarchenkoPastur { a2, c } => {
            if c < 1.0 {
                return Err(Error::argument(
                    "v_MP requires c ≥ 1 (continuous mass one)",
                ));
            }
            let r2 = radius * radius;
            let int = chebyshev_weighted_integral_complex(
                |lam| {
                    let num = r2 - (lam - center) * (lam - center);
                    Complex64::from_polar(1.0, t * lam) * (num / lam)
                },
                center,
                radius,
                KERNEL_ORDER,
            )?;
            Ok(int / (2.0 * PI * a2))
        }
    }
}

/// d/dt of the Marchenko–Pastur kernel,
/// v_MP′(t) = (i/2πa²) ∫ e^{itλ} √(4a⁴c−(λ−a_m)²) dλ.
pub fn v_mp_derivative(a2: f64, c: f64, t: f64) -> Result<Complex64> {
    if !(a2 > 0.0) || c < 1.0 {
        return Err(Error::argument("v_MP′ requires a² > 0 and c ≥ 1"));
    }
    let center = a2 * (c + 1.0);
    let radius = 2.0 * a2 * c.sqrt();
    let r2 = radius * radius;
    let int = chebyshev_weighted_integral_complex(
        |lam| {
            Complex64::from_polar(1.0, t * lam) * (r2 - (lam - center) * (lam - center))
        },
        center,
        radius,
        KERNEL_ORDER,
    )?;
    Ok(Complex64::new(0.0, 1.0) * int / (2.0 * PI * a2))
}

/// The self-convolution (v*v)(t) in closed quadrature form,
/// −(i/2πw⁴) ∫ e^{itμ} μ √(4w²−μ²) dμ. Valid for all real t.
pub fn vconv_kernel(t: f64, w: f64) -> Result<Complex64> {
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    let w2 = w * w;
    let int = chebyshev_weighted_integral_complex(
        |mu| Complex64::from_polar(1.0, t * mu) * (mu * (4.0 * w2 - mu * mu)),
        0.0,
        2.0 * w,
        KERNEL_ORDER,
    )?;
    Ok(Complex64::new(0.0, -1.0) * int / (2.0 * PI * w2 * w2))
}

/// I(t) = ∫₀ᵗ (v*v)(s) ds, the integrated self-convolution entering the
/// Wigner forcing term. Composite Simpson on a fixed subdivision.
pub fn vconv_integral(t: f64, w: f64, steps: usize) -> Result<Complex64> {
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    let n = steps.max(16);
    Ok(crate::quad::simpson(
        |s| vconv_kernel(s, w).expect("vconv_kernel is total for w > 0"),
        0.0,
        t,
        n,
    ))
}

/// Resolvent kernel T₁(t) = −(1/π) ∫ e^{iλt} dλ/√(4w²−λ²) = −J₀(2wt).
pub fn resolvent_kernel_t1(t: f64, w: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    Ok(-bessel_j(0, 2.0 * w * t)?)
}

/// Quadrature route for T₁, used as a cross-check of the Bessel identity.
pub fn resolvent_kernel_t1_quadrature(t: f64, w: f64) -> Result<f64> {
    let int = chebyshev_weighted_integral_complex(
        |lam| Complex64::from_polar(1.0, lam * t),
        0.0,
        2.0 * w,
        KERNEL_ORDER,
    )?;
    Ok(-int.re / PI)
}

/// A_κ₄(t) = (1/2πa⁴) ∫ e^{iμt} √(4a⁴c−(μ−a_m)²) dμ, the sample-covariance
/// fourth-cumulant kernel; A_κ₄(0) = c.
pub fn a_kappa4_kernel(t: f64, a: f64, c: f64) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::argument("a must be positive"));
    }
    if c < 1.0 {
        return Err(Error::argument("A_κ₄ requires c ≥ 1"));
    }
    let a2 = a * a;
    let center = a2 * (c + 1.0);
    let radius = 2.0 * a2 * c.sqrt();
    let r2 = radius * radius;
    let int = chebyshev_weighted_integral_complex(
        |mu| Complex64::from_polar(1.0, t * mu) * (r2 - (mu - center) * (mu - center)),
        center,
        radius,
        KERNEL_ORDER,
    )?;
    Ok(int / (2.0 * PI * a2 * a2))
}

/// Moment of the continuous part ∫ λ^k dN(λ) by weighted quadrature.
pub fn law_moment(law: &LimitLaw, k: u32, order: usize) -> Result<f64> {
    let (center, radius) = law.center_radius();
    let r2 = radius * radius;
    match *law {
        LimitLaw::Semicircle { w2 } => {
            let int = chebyshev_weighted_integral(
                |lam| lam.powi(k as i32) * (4.0 * w2 - lam * lam),
                center,
                radius,
                order,
            )?;
            Ok(int / (2.0 * PI * w2))
        }
        LimitLaw::MarchenkoPastur { a2, .. } => {
            let int = chebyshev_weighted_integral(
                |lam| {
                    let num = r2 - (lam - center) * (lam - center);
                    lam.powi(k as i32) * num / lam
                },
                center,
                radius,
                order,
            )?;
            Ok(int / (2.0 * PI * a2))
        }
    }
}

/// Stieltjes transform by direct quadrature against the density plus atom,
/// an independent oracle for [`stieltjes_limit`].
pub fn stieltjes_by_quadrature(law: &LimitLaw, z: Complex64, order: usize) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::argument("requires Im z ≠ 0"));
    }
    let (center, radius) = law.center_radius();
    let r2 = radius * radius;
    let int = match *law {
        LimitLaw::Semicircle { w2 } => {
            chebyshev_weighted_integral_complex(
                |lam| (4.0 * w2 - lam * lam) / (lam - z),
                center,
                radius,
                order,
            )? / (2.0 * PI * w2)
        }
        LimitLaw::MarchenkoPastur { a2, .. } => {
            chebyshev_weighted_integral_complex(
                |lam| (r2 - (lam - center) * (lam - center)) / (lam * (lam - z)),
                center,
                radius,
                order,
            )? / (2.0 * PI * a2)
        }
    };
    // The atom at zero contributes mass/(0 − z).
    Ok(int + law.atom_mass() / (-z))
}

const BESSEL_SERIES_CUTOFF: f64 = 16.0;

/// Bessel function of the first kind, order 0 or 1, by ascending series for
/// |x| ≤ 16 and the Hankel asymptotic expansion beyond. Absolute error stays
/// below 1e−10 for |x| ≤ 50.
pub fn bessel_j(order: u8, x: f64) -> Result<f64> {
    match order {
        0 => Ok(bessel_j0(x)),
        1 => Ok(bessel_j1(x)),
        other => Err(Error::argument(format!(
            "bessel_j supports orders 0 and 1, got {other}"
        ))),
    }
}

pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= BESSEL_SERIES_CUTOFF {
        bessel_series(0, ax)
    } else {
        bessel_asymptotic(0, ax)
    }
}

pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= BESSEL_SERIES_CUTOFF {
        bessel_series(1, ax)
    } else {
        bessel_asymptotic(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn bessel_series(order: u8, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let mut comp = 0.0;
    for m in 1..200 {
        let denom = if order == 0 {
            (m * m) as f64
        } else {
            (m * (m + 1)) as f64
        };
        term *= q / denom;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < 1e-18 * (1.0 + sum.abs()) {
            break;
        }
    }
    sum
}

/// Hankel expansion J_ν(x) = √(2/πx)[P cos χ − Q sin χ],
/// χ = x − νπ/2 − π/4, with coefficients a_k(ν) = ∏(4ν²−(2j−1)²)/(k!8ᵏ).
fn bessel_asymptotic(order: u8, x: f64) -> f64 {
    let mu = 4.0 * (order as f64) * (order as f64);
    let mut a = [0.0; 12];
    a[0] = 1.0;
    for k in 1..12 {
        let j = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (mu - j * j) / (k as f64 * 8.0);
    }
    let mut p = 0.0;
    let mut q = 0.0;
    let inv = 1.0 / x;
    let mut power = 1.0;
    for (k, &ak) in a.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * ak * power;
        if k % 2 == 0 {
            p += term;
        } else {
            q += term;
        }
        power *= inv;
    }
    let chi = x - (order as f64) * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Reference values (Abramowitz & Stegun tables).
    const J0_REF: &[(f64, f64)] = &[
        (0.0, 1.0),
        (1.0, 0.7651976865579665),
        (2.0, 0.2238907791412356),
        (5.0, -0.1775967713143383),
        (10.0, -0.2459357644513483),
        (16.0, -0.1748990739836291),
        (50.0, 0.0558123276692520),
    ];
    const J1_REF: &[(f64, f64)] = &[
        (0.0, 0.0),
        (1.0, 0.4400505857449335),
        (2.0, 0.5767248077568734),
        (5.0, -0.3275791375914653),
        (10.0, 0.0434727461688614),
        (16.0, 0.0903971756613040),
        (50.0, -0.0975118281251751),
    ];

    #[test]
    fn bessel_reference_values() {
        for &(x, v) in J0_REF {
            assert!((bessel_j0(x) - v).abs() < 1e-10, "J0({x})");
            assert!((bessel_j0(-x) - v).abs() < 1e-10, "J0(-{x})");
        }
        for &(x, v) in J1_REF {
            assert!((bessel_j1(x) - v).abs() < 1e-10, "J1({x})");
            assert!((bessel_j1(-x) + v).abs() < 1e-10, "J1(-{x})");
        }
        assert!(bessel_j(2, 1.0).is_err());
    }

    #[test]
    fn bessel_derivative_identity() {
        // J₀′ = −J₁ by finite differences.
        for &x in &[0.4, 1.3, 7.7, 20.0, 42.0] {
            let h = 1e-6;
            let fd = (bessel_j0(x + h) - bessel_j0(x - h)) / (2.0 * h);
            assert!((fd + bessel_j1(x)).abs() < 1e-6, "at {x}");
        }
    }

    #[test]
    fn bessel_j1_matches_truncated_series_oracle() {
        // Independent ascending series: term_m = (−1)^m (x/2)^{2m+1} / (m!(m+1)!).
        let x: f64 = 2.0;
        let mut oracle = 0.0;
        let mut fact_m = 1.0;
        for m in 0..25u32 {
            if m > 0 {
                fact_m *= m as f64;
            }
            let fact_m1 = fact_m * (m as f64 + 1.0);
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            oracle += sign * (x / 2.0).powi(2 * m as i32 + 1) / (fact_m * fact_m1);
        }
        assert!((bessel_j1(x) - oracle).abs() < 1e-12, "{oracle}");
    }

    #[test]
    fn semicircle_density_values() {
        let law = LimitLaw::semicircle(1.0).unwrap();
        assert_abs_diff_eq!(density(&law, 0.0), 1.0 / PI, epsilon = 1e-14);
        assert_eq!(density(&law, 2.0), 0.0);
        assert_eq!(density(&law, -2.0), 0.0);
        assert_eq!(density(&law, 3.0), 0.0);
    }

    #[test]
    fn mp_density_value_at_c1() {
        let law = LimitLaw::marchenko_pastur(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(density(&law, 2.0), 1.0 / (2.0 * PI), epsilon = 1e-14);
    }

    #[test]
    fn total_mass_is_one() {
        for law in [
            LimitLaw::semicircle(1.3).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 2.0).unwrap(),
            LimitLaw::marchenko_pastur(0.8, 1.0).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 0.5).unwrap(),
        ] {
            let mass = law_moment(&law, 0, 4096).unwrap() + law.atom_mass();
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn semicircle_catalan_moments() {
        let w2 = 1.44;
        let law = LimitLaw::semicircle(w2).unwrap();
        assert_abs_diff_eq!(law_moment(&law, 2, 128).unwrap(), w2, epsilon = 1e-10);
        assert_abs_diff_eq!(
            law_moment(&law, 4, 128).unwrap(),
            2.0 * w2 * w2,
            epsilon = 1e-10
        );
    }

    #[test]
    fn mp_moments() {
        // ∫λ dN_MP = ca², ∫λ² dN_MP = c(c+1)a⁴.
        for &(a2, c) in &[(1.0, 2.0), (1.5, 1.0), (1.0, 0.5)] {
            let law = LimitLaw::marchenko_pastur(a2, c).unwrap();
            assert!(
                (law_moment(&law, 1, 2048).unwrap() - c * a2).abs() < 1e-8,
                "first moment a2={a2} c={c}"
            );
            assert!(
                (law_moment(&law, 2, 2048).unwrap() - c * (c + 1.0) * a2 * a2).abs() < 1e-8,
                "second moment a2={a2} c={c}"
            );
        }
    }

    #[test]
    fn stieltjes_semicircle_at_i() {
        let law = LimitLaw::semicircle(1.0).unwrap();
        let f = stieltjes_limit(&law, Complex64::new(0.0, 1.0)).unwrap();
        let expected = (5f64.sqrt() - 1.0) / 2.0;
        assert_abs_diff_eq!(f.im, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(f.re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn stieltjes_large_z_asymptotics() {
        let law = LimitLaw::semicircle(1.0).unwrap();
        for &y in &[50.0, 200.0] {
            let z = Complex64::new(0.0, y);
            let f = stieltjes_limit(&law, z).unwrap();
            assert!((f + 1.0 / z).norm() < 2.0 / y.powi(3), "at y={y}");
        }
    }

    #[test]
    fn self_consistency_residuals_tiny() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let laws = [
            LimitLaw::semicircle(1.0).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 2.0).unwrap(),
        ];
        for law in &laws {
            for _ in 0..100 {
                let re = 10.0 * rng.random::<f64>() - 5.0;
                let im = (0.1 + 2.9 * rng.random::<f64>())
                    * if rng.random::<bool>() { 1.0 } else { -1.0 };
                let z = Complex64::new(re, im);
                let res = self_consistency_residual(law, z).unwrap();
                assert!(res < 1e-12 * (1.0 + z.norm()), "residual {res} at {z}");
                // Herglotz property: Im f · Im z > 0.
                let f = stieltjes_limit(law, z).unwrap();
                assert!(f.im * z.im > 0.0);
            }
        }
    }

    #[test]
    fn mp_residual_example() {
        let law = LimitLaw::marchenko_pastur(1.0, 2.0).unwrap();
        let res = self_consistency_residual(&law, Complex64::new(1.0, 1.0)).unwrap();
        assert!(res < 1e-12);
    }

    #[test]
    fn stieltjes_matches_quadrature_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for law in [
            LimitLaw::semicircle(1.2).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 2.0).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 0.6).unwrap(),
        ] {
            for _ in 0..10 {
                let re = 6.0 * rng.random::<f64>() - 3.0;
                let im = (0.5 + 2.0 * rng.random::<f64>())
                    * if rng.random::<bool>() { 1.0 } else { -1.0 };
                let z = Complex64::new(re, im);
                let exact = stieltjes_limit(&law, z).unwrap();
                let quad = stieltjes_by_quadrature(&law, z, 4096).unwrap();
                assert!(
                    (exact - quad).norm() < 1e-8,
                    "law {law:?} z {z}: {exact} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn v_kernel_matches_bessel_identity() {
        let law = LimitLaw::semicircle(1.0).unwrap();
        let w = 1.0;
        for i in 0..=40 {
            let t = i as f64 * 0.25;
            let v = v_kernel(&law, t).unwrap();
            let exact = if t == 0.0 {
                1.0
            } else {
                bessel_j1(2.0 * w * t) / (w * t)
            };
            assert!((v.re - exact).abs() < 1e-9, "t={t}: {} vs {exact}", v.re);
            assert!(v.im.abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn v_kernel_mass_at_zero() {
        for law in [
            LimitLaw::semicircle(1.7).unwrap(),
            LimitLaw::marchenko_pastur(1.0, 1.0).unwrap(),
            LimitLaw::marchenko_pastur(1.3, 2.5).unwrap(),
        ] {
            let v = v_kernel(&law, 0.0).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
        assert!(v_kernel(&LimitLaw::marchenko_pastur(1.0, 0.5).unwrap(), 0.0).is_err());
    }

    #[test]
    fn vconv_matches_direct_convolution() {
        // Direct convolution ∫₀ᵗ v(t−s)v(s) ds by composite Simpson.
        let w = 1.0;
        let law = LimitLaw::semicircle(1.0).unwrap();
        for &t in &[0.5, 1.3, 2.0, 4.0] {
            let direct = crate::quad::simpson(
                |s| v_kernel(&law, t - s).unwrap() * v_kernel(&law, s).unwrap(),
                0.0,
                t,
                ((t * 100.0) as usize).max(50),
            );
            let closed = vconv_kernel(t, w).unwrap();
            assert!(
                (closed - direct).norm() < 1e-6,
                "t={t}: {closed} vs {direct}"
            );
        }
        assert_abs_diff_eq!(vconv_kernel(0.0, w).unwrap().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn vconv_integration_by_parts_form() {
        // (1/πtw⁴) ∫ e^{itμ}(2w²−μ²)/√(4w²−μ²) dμ agrees for t ≠ 0.
        let w = 1.0;
        let w2 = w * w;
        for &t in &[0.7, 1.9, 3.1] {
            let alt = chebyshev_weighted_integral_complex(
                |mu| Complex64::from_polar(1.0, t * mu) * (2.0 * w2 - mu * mu),
                0.0,
                2.0 * w,
                256,
            )
            .unwrap()
                / (PI * t * w2 * w2);
            let closed = vconv_kernel(t, w).unwrap();
            assert!((closed - alt).norm() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn t1_kernel_identities() {
        let w = 1.0;
        assert_abs_diff_eq!(resolvent_kernel_t1(0.0, w).unwrap(), -1.0, epsilon = 1e-12);
        for i in 0..=40 {
            let t = i as f64 * 0.25;
            let bessel = resolvent_kernel_t1(t, w).unwrap();
            let quad = resolvent_kernel_t1_quadrature(t, w).unwrap();
            assert!((bessel - quad).abs() < 1e-9, "t={t}: {bessel} vs {quad}");
            assert!(bessel.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn t1_envelope_decay() {
        // |T₁(t)| tracks the √(1/πwt) Hankel envelope at large t.
        let w = 1.0;
        for &t in &[20.0, 35.0, 50.0] {
            let envelope = (1.0 / (PI * w * t)).sqrt();
            let v = resolvent_kernel_t1(t, w).unwrap().abs();
            assert!(v <= 1.05 * envelope, "t={t}: |T1|={v} envelope={envelope}");
        }
    }

    #[test]
    fn a_kappa4_at_zero_is_c() {
        for &(a, c) in &[(1.0, 1.0), (1.3, 1.7), (0.9, 2.5)] {
            let v = a_kappa4_kernel(0.0, a, c).unwrap();
            assert_abs_diff_eq!(v.re, c, epsilon = 1e-9);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
        }
        assert!(a_kappa4_kernel(0.0, 1.0, 0.9).is_err());
    }

    #[test]
    fn a_kappa4_convolution_form() {
        // A_κ₄(t) = c·v_MP(t) + ∫₀ᵗ v_MP(t−s) v_MP′(s) ds.
        let (a, c) = (1.0, 1.5);
        let a2 = a * a;
        let law = LimitLaw::marchenko_pastur(a2, c).unwrap();
        for &t in &[0.5, 1.0] {
            let conv = crate::quad::simpson(
                |s| v_kernel(&law, t - s).unwrap() * v_mp_derivative(a2, c, s).unwrap(),
                0.0,
                t,
                200,
            );
            let direct = a_kappa4_kernel(t, a, c).unwrap();
            let composed = c * v_kernel(&law, t).unwrap() + conv;
            assert!(
                (direct - composed).norm() < 1e-5,
                "t={t}: {direct} vs {composed}"
            );
        }
    }
}
