//! Limiting variances of linear eigenvalue statistics, evaluated by
//! Gauss–Chebyshev quadrature adapted to the inverse-square-root edge weight.
//!
//! The Gaussian-ensemble variance is the double integral
//!
//! ```text
//! V = (1/2π²) ∬ (Δφ/Δλ)² · (R² − x₁x₂) / (√(R²−x₁²) √(R²−x₂²)) dλ₁ dλ₂
//! ```
//!
//! over the support (x = λ − center, R = radius), and the fourth-cumulant
//! corrections are squares of singular-weight single integrals. The divided
//! difference has a removable singularity on the diagonal, replaced by
//! φ′((λ₁+λ₂)/2) below a relative threshold.

use crate::error::{Error, Result};
use crate::testfns::TestFunction;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Relative diagonal threshold for the divided difference (fraction of the
/// support radius); below it the difference quotient loses all precision.
const DIAGONAL_THRESHOLD: f64 = 1e-8;

/// Which limiting formula produced a [`VarianceResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaTag {
    Goe,
    Wigner,
    Wishart,
    SampleCovariance,
}

impl std::fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FormulaTag::Goe => "GOE",
            FormulaTag::Wigner => "Wigner",
            FormulaTag::Wishart => "Wishart",
            FormulaTag::SampleCovariance => "SampleCovariance",
        };
        f.write_str(s)
    }
}

/// A limiting variance split into its Gaussian and fourth-cumulant parts.
#[derive(Debug, Clone)]
pub struct VarianceResult {
    pub total: f64,
    pub gaussian_part: f64,
    /// κ₄ contribution; may be negative, but the total cannot.
    pub kappa4_part: f64,
    pub formula_tag: FormulaTag,
    pub quadrature_order: usize,
    /// |value(order) − value(2·order)| from order-doubling.
    pub est_error: f64,
    /// Set when a tiny negative total (≥ −1e−10) was clamped to zero.
    pub clamped: bool,
}

/// Gauss–Chebyshev rule for ∫ g(λ) dλ/√(radius² − (λ−center)²):
/// (π/order) Σ g(center + radius·cos θ_k), θ_k = π(k−1/2)/order.
/// Exact for polynomial g of degree < 2·order.
pub fn chebyshev_weighted_integral(
    g: impl Fn(f64) -> f64,
    center: f64,
    radius: f64,
    order: usize,
) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::argument("quadrature radius must be positive"));
    }
    if order < 2 {
        return Err(Error::argument("quadrature order must be at least 2"));
    }
    let mut acc = 0.0;
    let mut comp = 0.0;
    for k in 1..=order {
        let theta = PI * (k as f64 - 0.5) / order as f64;
        let v = g(center + radius * theta.cos());
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    Ok(acc * PI / order as f64)
}

/// Complex-valued variant of [`chebyshev_weighted_integral`], used for the
/// oscillatory Fourier kernels.
pub fn chebyshev_weighted_integral_complex(
    g: impl Fn(f64) -> Complex64,
    center: f64,
    radius: f64,
    order: usize,
) -> Result<Complex64> {
    if !(radius > 0.0) {
        return Err(Error::argument("quadrature radius must be positive"));
    }
    if order < 2 {
        return Err(Error::argument("quadrature order must be at least 2"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=order {
        let theta = PI * (k as f64 - 0.5) / order as f64;
        acc += g(center + radius * theta.cos());
    }
    Ok(acc * PI / order as f64)
}

/// Core tensor rule shared by the Gaussian-ensemble variances: the double
/// integral over [center ± radius] with numerator R² − (λ₁−c)(λ₂−c).
fn gaussian_variance_core(
    phi: &TestFunction,
    center: f64,
    radius: f64,
    order: usize,
) -> f64 {
    let nodes: Vec<f64> = (1..=order)
        .map(|k| center + radius * (PI * (k as f64 - 0.5) / order as f64).cos())
        .collect();
    let phi_vals: Vec<f64> = nodes.iter().map(|&x| phi.evaluate(x)).collect();
    let threshold = DIAGONAL_THRESHOLD * radius;
    let r2 = radius * radius;
    let mut acc = 0.0;
    let mut comp = 0.0;
    for (i, &l1) in nodes.iter().enumerate() {
        for (j, &l2) in nodes.iter().enumerate() {
            let dd = if (l1 - l2).abs() < threshold {
                phi.derivative(0.5 * (l1 + l2))
            } else {
                (phi_vals[i] - phi_vals[j]) / (l1 - l2)
            };
            let num = r2 - (l1 - center) * (l2 - center);
            let v = dd * dd * num;
            let y = v - comp;
            let t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
    }
    let weight = PI / order as f64;
    acc * weight * weight / (2.0 * PI * PI)
}

fn finish(
    tag: FormulaTag,
    order: usize,
    gaussian_part: f64,
    kappa4_part: f64,
    gaussian_double: f64,
    kappa4_double: f64,
) -> Result<VarianceResult> {
    let total_raw = gaussian_part + kappa4_part;
    let est_error =
        (gaussian_part - gaussian_double).abs() + (kappa4_part - kappa4_double).abs();
    let (total, clamped) = if total_raw < 0.0 {
        if total_raw >= -1e-10 {
            (0.0, true)
        } else {
            return Err(Error::numeric(format!(
                "negative limiting variance {total_raw:.3e} for {tag}: \
                 incompatible κ₄/test-function pairing or quadrature failure"
            )));
        }
    } else {
        (total_raw, false)
    };
    Ok(VarianceResult {
        total,
        gaussian_part,
        kappa4_part,
        formula_tag: tag,
        quadrature_order: order,
        est_error,
        clamped,
    })
}

fn check_order(order: usize) -> Result<()> {
    if order < 16 {
        return Err(Error::argument("variance quadrature order must be ≥ 16"));
    }
    Ok(())
}

/// Limiting variance of GOE linear statistics.
pub fn variance_goe(phi: &TestFunction, w: f64, order: usize) -> Result<VarianceResult> {
    check_order(order)?;
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    let v = gaussian_variance_core(phi, 0.0, 2.0 * w, order);
    let v2 = gaussian_variance_core(phi, 0.0, 2.0 * w, 2 * order);
    finish(FormulaTag::Goe, order, v, 0.0, v2, 0.0)
}

/// The constant B = (1/πw⁴) ∫ φ(μ)(2w²−μ²)/√(4w²−μ²) dμ entering the
/// Wigner fourth-cumulant correction κ₄B²/2.
pub fn kappa4_constant_b(phi: &TestFunction, w: f64, order: usize) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    let w2 = w * w;
    let int = chebyshev_weighted_integral(
        |mu| phi.evaluate(mu) * (2.0 * w2 - mu * mu),
        0.0,
        2.0 * w,
        order,
    )?;
    Ok(int / (PI * w2 * w2))
}

/// Limiting variance for Wigner matrices with fourth cumulant κ₄ of the
/// off-diagonal entries: V_GOE + κ₄B²/2.
pub fn variance_wigner(
    phi: &TestFunction,
    w: f64,
    kappa4: f64,
    order: usize,
) -> Result<VarianceResult> {
    check_order(order)?;
    let gauss = variance_goe(phi, w, order)?;
    let b = kappa4_constant_b(phi, w, order)?;
    let b2 = kappa4_constant_b(phi, w, 2 * order)?;
    let gauss2 = gaussian_variance_core(phi, 0.0, 2.0 * w, 2 * order);
    finish(
        FormulaTag::Wigner,
        order,
        gauss.gaussian_part,
        kappa4 * b * b / 2.0,
        gauss2,
        kappa4 * b2 * b2 / 2.0,
    )
}

fn mp_geometry(a: f64, c: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(Error::argument("a must be positive"));
    }
    if c < 1.0 {
        return Err(Error::argument(
            "aspect ratio c must satisfy c ≥ 1 (the CLT hypothesis for covariance ensembles)",
        ));
    }
    let a2 = a * a;
    Ok((a2 * (c + 1.0), 2.0 * a2 * c.sqrt()))
}

/// Limiting variance of Wishart linear statistics (aspect ratio c ≥ 1).
pub fn variance_wishart(
    phi: &TestFunction,
    a: f64,
    c: f64,
    order: usize,
) -> Result<VarianceResult> {
    check_order(order)?;
    let (center, radius) = mp_geometry(a, c)?;
    let v = gaussian_variance_core(phi, center, radius, order);
    let v2 = gaussian_variance_core(phi, center, radius, 2 * order);
    finish(FormulaTag::Wishart, order, v, 0.0, v2, 0.0)
}

/// The constant C[φ] = (1/2πa⁴) ∫ φ(μ)(μ−a_m)/√(4a⁴c−(μ−a_m)²) dμ entering
/// the sample-covariance fourth-cumulant correction (κ₄/c)·C[φ]².
pub fn kappa4_constant_c(phi: &TestFunction, a: f64, c: f64, order: usize) -> Result<f64> {
    let (center, radius) = mp_geometry(a, c)?;
    let int = chebyshev_weighted_integral(
        |mu| phi.evaluate(mu) * (mu - center),
        center,
        radius,
        order,
    )?;
    Ok(int / (2.0 * PI * a.powi(4)))
}

/// Limiting variance for sample-covariance matrices with entry fourth
/// cumulant κ₄: V_Wish + (κ₄/4cπ²a⁸)·I², I = ∫φ(μ)(μ−a_m)/√(4a⁴c−(μ−a_m)²)dμ.
pub fn variance_sample_covariance(
    phi: &TestFunction,
    a: f64,
    c: f64,
    kappa4: f64,
    order: usize,
) -> Result<VarianceResult> {
    check_order(order)?;
    let (center, radius) = mp_geometry(a, c)?;
    let gauss = gaussian_variance_core(phi, center, radius, order);
    let gauss2 = gaussian_variance_core(phi, center, radius, 2 * order);
    let correction = |ord: usize| -> Result<f64> {
        let i = chebyshev_weighted_integral(
            |mu| phi.evaluate(mu) * (mu - center),
            center,
            radius,
            ord,
        )?;
        Ok(kappa4 / (4.0 * c * PI * PI * a.powi(8)) * i * i)
    };
    finish(
        FormulaTag::SampleCovariance,
        order,
        gauss,
        correction(order)?,
        gauss2,
        correction(2 * order)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn chebyshev_rule_moments() {
        // ∫ dλ/√(r²−λ²) = π, ∫ λ² dλ/√ = πr²/2, odd moments vanish.
        let r = 1.7;
        let m0 = chebyshev_weighted_integral(|_| 1.0, 0.0, r, 32).unwrap();
        assert_abs_diff_eq!(m0, PI, epsilon = 1e-13);
        let m2 = chebyshev_weighted_integral(|x| x * x, 0.0, r, 32).unwrap();
        assert_abs_diff_eq!(m2, PI * r * r / 2.0, epsilon = 1e-12);
        let m1 = chebyshev_weighted_integral(|x| x, 0.0, r, 32).unwrap();
        assert_abs_diff_eq!(m1, 0.0, epsilon = 1e-13);

        assert!(chebyshev_weighted_integral(|_| 1.0, 0.0, -1.0, 32).is_err());
        assert!(chebyshev_weighted_integral(|_| 1.0, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn goe_variance_identity_function() {
        // Moment reduction: ∬(4w²−λ₁λ₂)dμdμ = 4w²π² → V = 2w².
        let phi = TestFunction::monomial(1);
        let v = variance_goe(&phi, 1.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 2.0, epsilon = 1e-10);
        let v = variance_goe(&phi, 1.3, 128).unwrap();
        assert_abs_diff_eq!(v.total, 2.0 * 1.3 * 1.3, epsilon = 1e-9);
    }

    #[test]
    fn goe_variance_square_function() {
        let phi = TestFunction::monomial(2);
        let v = variance_goe(&phi, 1.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 4.0, epsilon = 1e-10);
        assert!(v.est_error < 1e-10);
    }

    #[test]
    fn goe_variance_constant_is_zero() {
        let v = variance_goe(&TestFunction::constant(3.0), 1.0, 64).unwrap();
        assert_eq!(v.total, 0.0);
    }

    #[test]
    fn kappa4_b_values() {
        assert_abs_diff_eq!(
            kappa4_constant_b(&TestFunction::constant(1.0), 1.0, 128).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            kappa4_constant_b(&TestFunction::monomial(2), 1.0, 128).unwrap(),
            -2.0,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            kappa4_constant_b(&TestFunction::monomial(1), 1.0, 128).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wigner_variance_with_uniform_excess() {
        let phi = TestFunction::monomial(2);
        let v = variance_wigner(&phi, 1.0, -6.0 / 5.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 1.6, epsilon = 1e-10);
        assert_abs_diff_eq!(v.gaussian_part, 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(v.kappa4_part, -2.4, epsilon = 1e-10);
    }

    #[test]
    fn wigner_variance_rademacher_degenerates() {
        // Tr M² is deterministic for ±1 off-diagonal entries.
        let phi = TestFunction::monomial(2);
        let v = variance_wigner(&phi, 1.0, -2.0, 128).unwrap();
        assert!(v.total.abs() < 1e-10, "{v:?}");
    }

    #[test]
    fn wigner_zero_excess_equals_goe() {
        let phi = TestFunction::gauss_bump(0.0, 1.0).unwrap();
        let vg = variance_goe(&phi, 1.0, 128).unwrap();
        let vw = variance_wigner(&phi, 1.0, 0.0, 128).unwrap();
        assert_eq!(vg.total, vw.total);
    }

    #[test]
    fn wishart_variance_identity_function() {
        let phi = TestFunction::monomial(1);
        let v = variance_wishart(&phi, 1.0, 2.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 4.0, epsilon = 1e-10);
        let v = variance_wishart(&phi, 1.0, 1.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 2.0, epsilon = 1e-10);
        assert!(variance_wishart(&phi, 1.0, 0.5, 128).is_err());
    }

    #[test]
    fn sample_covariance_variance_uniform_excess() {
        let phi = TestFunction::monomial(1);
        let v = variance_sample_covariance(&phi, 1.0, 2.0, -6.0 / 5.0, 128).unwrap();
        assert_abs_diff_eq!(v.total, 1.6, epsilon = 1e-10);
        assert_abs_diff_eq!(v.gaussian_part, 4.0, epsilon = 1e-10);
        // I = 2πa⁴c ⇒ κ₄ part = c·κ₄.
        assert_abs_diff_eq!(v.kappa4_part, -2.4, epsilon = 1e-10);

        let v0 = variance_sample_covariance(&phi, 1.0, 2.0, 0.0, 128).unwrap();
        let vw = variance_wishart(&phi, 1.0, 2.0, 128).unwrap();
        assert_eq!(v0.total, vw.total);
    }

    #[test]
    fn kappa4_routes_agree() {
        // (κ₄/4cπ²a⁸)I² with I = 2πa⁴·C[φ] equals (κ₄/c)·C[φ]².
        let phi = TestFunction::poisson(2.0, 1.0).unwrap();
        let (a, c, kappa4) = (1.1, 1.8, -0.7);
        let cphi = kappa4_constant_c(&phi, a, c, 128).unwrap();
        let via_c = kappa4 / c * cphi * cphi;
        let v = variance_sample_covariance(&phi, a, c, kappa4, 128).unwrap();
        assert_abs_diff_eq!(v.kappa4_part, via_c, epsilon = 1e-10);
    }

    #[test]
    fn quadrature_converges_for_smooth_phi() {
        let phi = TestFunction::gauss_bump(0.2, 0.8).unwrap();
        let configs: Vec<(f64, Box<dyn Fn(usize) -> f64>)> = vec![
            (
                1.0,
                Box::new(move |ord| {
                    variance_goe(&TestFunction::gauss_bump(0.2, 0.8).unwrap(), 1.0, ord)
                        .unwrap()
                        .total
                }),
            ),
            (
                1.0,
                Box::new(move |ord| {
                    variance_wigner(
                        &TestFunction::gauss_bump(0.2, 0.8).unwrap(),
                        1.0,
                        -1.2,
                        ord,
                    )
                    .unwrap()
                    .total
                }),
            ),
        ];
        for (_, eval) in &configs {
            let v64 = eval(64);
            let v128 = eval(128);
            assert!((v64 - v128).abs() < 1e-8, "{v64} vs {v128}");
        }
        let vw64 = variance_wishart(&phi, 1.0, 2.0, 64).unwrap().total;
        let vw128 = variance_wishart(&phi, 1.0, 2.0, 128).unwrap().total;
        assert!((vw64 - vw128).abs() < 1e-8);
        let vs64 = variance_sample_covariance(&phi, 1.0, 2.0, -1.2, 64)
            .unwrap()
            .total;
        let vs128 = variance_sample_covariance(&phi, 1.0, 2.0, -1.2, 128)
            .unwrap()
            .total;
        assert!((vs64 - vs128).abs() < 1e-8);
    }

    #[test]
    fn goe_scale_covariance() {
        // Replacing (φ(λ), w) by (φ(sλ), w/s) leaves V_GOE invariant.
        let phi = TestFunction::gauss_bump(0.0, 1.0).unwrap();
        let s = 2.0;
        let v1 = variance_goe(&phi, 1.0, 128).unwrap().total;
        let v2 = variance_goe(&phi.dilated(s).unwrap(), 1.0 / s, 128)
            .unwrap()
            .total;
        assert_abs_diff_eq!(v1, v2, epsilon = 1e-8);
    }
}
