//! The characteristic-function machinery: the generalized Fourier transform
//! (a π/2-rotated Laplace transform), the second-kind Volterra equation
//!
//! ```text
//! P(t) + ∫₀ᵗ dt₁ ∫₀^{t₁} Q₁(t₁−t₂) P(t₂) dt₂ = R(t),
//! ```
//!
//! its closed-form solution for the semicircle kernel, and the limiting
//! characteristic-function equation Z(x) = 1 − V ∫₀ˣ y Z(y) dy.
//!
//! Negative times are recovered from the symmetry conj(Y(x,t)) = Y(−x,−t);
//! everything here works on t ≥ 0.

use crate::error::{Error, Result};
use crate::laws::LimitLaw;
use crate::quad;
use crate::testfns::TestFunction;
use crate::variance::chebyshev_weighted_integral_complex;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default marching grid: h = 1/200 up to T = 20.
pub const DEFAULT_GRID_STEP: f64 = 1.0 / 200.0;
pub const DEFAULT_GRID_HORIZON: f64 = 20.0;

/// Uniformly sampled function on t = 0, h, 2h, …, T.
#[derive(Debug, Clone)]
pub struct GridFunction {
    h: f64,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_complex(h: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::argument("grid step must be positive"));
        }
        if values.len() < 2 {
            return Err(Error::argument("grid needs at least two samples"));
        }
        Ok(GridFunction { h, values })
    }

    pub fn from_real(h: f64, values: Vec<f64>) -> Result<Self> {
        Self::from_complex(h, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f` on the uniform grid covering [0, t_max].
    pub fn sample(h: f64, t_max: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if !(h > 0.0) || !(t_max > h) {
            return Err(Error::argument("need h > 0 and t_max > h"));
        }
        let len = (t_max / h).round() as usize + 1;
        let values = (0..len).map(|k| f(k as f64 * h)).collect();
        Self::from_complex(h, values)
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.h * (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |a, v| a.max(v.norm()))
    }

    fn same_grid(&self, other: &GridFunction) -> bool {
        (self.h - other.h).abs() <= 1e-12 * self.h && self.values.len() == other.values.len()
    }

    /// Trapezoid convolution (f * g)(t_k) = ∫₀^{t_k} f(t_k−s) g(s) ds on the
    /// shared grid.
    pub fn convolve(&self, other: &GridFunction) -> Result<GridFunction> {
        if !self.same_grid(other) {
            return Err(Error::argument("convolution requires matching grids"));
        }
        let n = self.values.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            let mut acc = 0.5 * (self.values[k] * other.values[0] + self.values[0] * other.values[k]);
            for i in 1..k {
                acc += self.values[k - i] * other.values[i];
            }
            out[k] = acc * self.h;
        }
        GridFunction::from_complex(self.h, out)
    }
}

/// Generalized Fourier transform f̃(z) = i⁻¹ ∫₀^∞ e^{−izt} f(t) dt for
/// Im z < 0, by the trapezoid rule on the truncated grid.
///
/// The truncated tail must be negligible: |e^{Im z·T}|·sup|f| < 1e−8.
pub fn generalized_fourier(f: &GridFunction, z: Complex64) -> Result<Complex64> {
    if z.im >= 0.0 {
        return Err(Error::argument("generalized_fourier requires Im z < 0"));
    }
    let tail = (z.im * f.horizon()).exp() * f.max_abs();
    if tail >= 1e-8 {
        return Err(Error::argument(format!(
            "truncation tail {tail:.2e} too large; extend the grid horizon"
        )));
    }
    let h = f.step();
    let weighted: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let t = k as f64 * h;
            // e^{−izt} = e^{z.im·t} · e^{−i·z.re·t}
            Complex64::from_polar((z.im * t).exp(), -z.re * t) * v
        })
        .collect();
    Ok(quad::trapezoid_uniform(&weighted, h) / Complex64::i())
}

/// Marching solution of P(t) + ∫₀ᵗ∫₀^{t₁} Q₁(t₁−t₂)P(t₂) dt₂ dt₁ = R(t).
///
/// Both integrals are discretized with the trapezoid rule; the resulting
/// implicit step is solved in closed form, giving a globally second-order
/// scheme. The inner history H_j = (Q₁*P)(t_j) is frozen once computed, so
/// the total cost is O(N²).
pub fn solve_volterra(q1: &GridFunction, r: &GridFunction) -> Result<GridFunction> {
    if !q1.same_grid(r) {
        return Err(Error::argument("solve_volterra requires matching grids"));
    }
    let h = q1.step();
    let n = q1.len();
    let q = q1.values();
    let rv = r.values();
    let mut p = vec![Complex64::new(0.0, 0.0); n];
    let mut hist = vec![Complex64::new(0.0, 0.0); n]; // H_j = (Q1 * P)(t_j)
    let mut hist_sum = Complex64::new(0.0, 0.0); // Σ_{j=1}^{k-1} H_j
    p[0] = rv[0];
    // The implicit P_k coefficient from both trapezoid half-weights.
    let self_coeff = Complex64::new(1.0, 0.0) + h * h * 0.25 * q[0];
    for k in 1..n {
        // Partial inner trapezoid at t_k, excluding the unknown P_k term.
        let mut hk_partial = 0.5 * q[k] * p[0];
        for i in 1..k {
            hk_partial += q[k - i] * p[i];
        }
        hk_partial *= h;
        // Outer trapezoid D_k = h(Σ_{j=1}^{k-1} H_j + H_k/2), H_0 = 0.
        let d_partial = h * (hist_sum + 0.5 * hk_partial);
        p[k] = (rv[k] - d_partial) / self_coeff;
        let hk = hk_partial + h * 0.5 * q[0] * p[k];
        hist[k] = hk;
        hist_sum += hk;
    }
    GridFunction::from_complex(h, p)
}

/// The forcing term A(t) = −(1/π) ∫₀ᵗ dt₁ ∫ e^{it₁λ} φ′(λ) √(R²−(λ−c)²) dλ
/// for the semicircle or Marchenko–Pastur (c ≥ 1) law, sampled on a grid.
///
/// The inner integral is evaluated by the edge-regularized Chebyshev rule and
/// accumulated with the trapezoid rule in t₁, matching the Volterra solver's
/// order of accuracy.
pub fn a_function_grid(
    phi: &TestFunction,
    law: &LimitLaw,
    h: f64,
    t_max: f64,
) -> Result<GridFunction> {
    if let LimitLaw::MarchenkoPastur { c, .. } = law {
        if *c < 1.0 {
            return Err(Error::argument("A(t) for MP requires c ≥ 1"));
        }
    }
    let (center, radius) = law.center_radius();
    let r2 = radius * radius;
    let inner = |t1: f64| -> Result<Complex64> {
        let int = chebyshev_weighted_integral_complex(
            |lam| {
                Complex64::from_polar(1.0, t1 * lam)
                    * (phi.derivative(lam) * (r2 - (lam - center) * (lam - center)))
            },
            center,
            radius,
            256,
        )?;
        Ok(-int / PI)
    };
    let len = (t_max / h).round() as usize + 1;
    let mut values = Vec::with_capacity(len);
    values.push(Complex64::new(0.0, 0.0));
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = inner(0.0)?;
    for k in 1..len {
        let cur = inner(k as f64 * h)?;
        acc += 0.5 * h * (prev + cur);
        values.push(acc);
        prev = cur;
    }
    GridFunction::from_complex(h, values)
}

/// Pointwise A(t) via an adaptive outer quadrature (for spot checks).
pub fn a_function(t: f64, phi: &TestFunction, law: &LimitLaw) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (center, radius) = law.center_radius();
    if let LimitLaw::MarchenkoPastur { c, .. } = law {
        if *c < 1.0 {
            return Err(Error::argument("A(t) for MP requires c ≥ 1"));
        }
    }
    let r2 = radius * radius;
    let inner = |t1: f64| {
        chebyshev_weighted_integral_complex(
            |lam| {
                Complex64::from_polar(1.0, t1 * lam)
                    * (phi.derivative(lam) * (r2 - (lam - center) * (lam - center)))
            },
            center,
            radius,
            256,
        )
        .expect("fixed-order rule cannot fail for valid geometry")
    };
    Ok(-quad::adaptive_simpson(&inner, 0.0, t, 1e-10) / PI)
}

/// Closed-form limiting correlator for the semicircle kernel:
///
/// ```text
/// Y(x,t) = (ixZ/π²) ∫ dμ/√(4w²−μ²) ∫ (e^{itλ}−e^{itμ})/(λ−μ)
///                                   · φ′(λ) √(4w²−λ²) dλ
/// ```
///
/// evaluated by a tensor Chebyshev rule with the removable diagonal replaced
/// by it·e^{it(λ+μ)/2}.
pub fn closed_form_y(
    x: f64,
    t: f64,
    phi: &TestFunction,
    w: f64,
    z_value: f64,
    order: usize,
) -> Result<Complex64> {
    if !(w > 0.0) {
        return Err(Error::argument("w must be positive"));
    }
    if order < 16 {
        return Err(Error::argument("closed_form_y order must be ≥ 16"));
    }
    if x == 0.0 || t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let radius = 2.0 * w;
    let nodes: Vec<f64> = (1..=order)
        .map(|k| radius * (PI * (k as f64 - 0.5) / order as f64).cos())
        .collect();
    let phases: Vec<Complex64> = nodes
        .iter()
        .map(|&l| Complex64::from_polar(1.0, t * l))
        .collect();
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&l| phi.derivative(l) * (radius * radius - l * l))
        .collect();
    let threshold = 1e-8 * radius;
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &mu) in nodes.iter().enumerate() {
        let mut inner = Complex64::new(0.0, 0.0);
        for (j, &lam) in nodes.iter().enumerate() {
            let ratio = if (lam - mu).abs() < threshold {
                Complex64::i() * t * Complex64::from_polar(1.0, t * 0.5 * (lam + mu))
            } else {
                (phases[j] - phases[i]) / (lam - mu)
            };
            inner += ratio * weights[j];
        }
        acc += inner;
    }
    let rule_weight = PI / order as f64;
    Ok(Complex64::i() * x * z_value / (PI * PI) * acc * rule_weight * rule_weight)
}

/// Limiting characteristic function Z(x) = e^{−x²V/2} together with the
/// quadrature residual of its defining equation Z(x) = 1 − V ∫₀ˣ y Z(y) dy.
pub fn limiting_z(x: f64, v: f64) -> Result<(f64, f64)> {
    if v < 0.0 {
        return Err(Error::argument("variance must be nonnegative"));
    }
    let z = (-x * x * v / 2.0).exp();
    let integral = quad::adaptive_simpson(
        &|y: f64| Complex64::new(y * (-y * y * v / 2.0).exp(), 0.0),
        0.0,
        x.abs(),
        1e-13,
    )
    .re;
    let residual = (z - 1.0 + v * integral).abs();
    Ok((z, residual))
}

/// Recovered derivative of the characteristic function,
/// Z′(x) = i ∫ φ̂(t) Y(x,t) dt = −2 Im ∫₀^∞ φ̂(t) Y(x,t) dt,
/// evaluated by the trapezoid rule on the solver grid.
pub fn z_derivative_from_y(phi: &TestFunction, y: &GridFunction) -> Result<f64> {
    if !phi.has_fourier() {
        return Err(Error::argument(
            "z_derivative_from_y needs a test function with a Fourier transform",
        ));
    }
    let h = y.step();
    let weighted: Vec<Complex64> = y
        .values()
        .iter()
        .enumerate()
        .map(|(k, &v)| phi.fourier(k as f64 * h).unwrap() * v)
        .collect();
    let integral = quad::trapezoid_uniform(&weighted, h);
    Ok(-2.0 * integral.im)
}

/// Builds the Volterra right-hand side x·Z·[A(t) + iκ₄·B·I(t)] on a grid;
/// κ₄ = 0 reduces to the Gaussian-ensemble forcing.
pub fn wigner_forcing_grid(
    phi: &TestFunction,
    w: f64,
    x: f64,
    z_value: f64,
    kappa4: f64,
    b_constant: f64,
    h: f64,
    t_max: f64,
) -> Result<GridFunction> {
    let law = LimitLaw::semicircle(w * w)?;
    let a = a_function_grid(phi, &law, h, t_max)?;
    let len = a.len();
    let mut values = Vec::with_capacity(len);
    if kappa4 == 0.0 {
        for k in 0..len {
            values.push(x * z_value * a.values()[k]);
        }
    } else {
        // I(t) = ∫₀ᵗ (v*v); accumulate by trapezoid on the same grid.
        let vconv: Vec<Complex64> = (0..len)
            .map(|k| crate::laws::vconv_kernel(k as f64 * h, w).expect("valid w"))
            .collect();
        let mut i_acc = Complex64::new(0.0, 0.0);
        for k in 0..len {
            if k > 0 {
                i_acc += 0.5 * h * (vconv[k - 1] + vconv[k]);
            }
            let forcing = a.values()[k] + Complex64::i() * kappa4 * b_constant * i_acc;
            values.push(x * z_value * forcing);
        }
    }
    GridFunction::from_complex(h, values)
}

/// Samples the semicircle kernel 2w²·v(t) on a grid, the Volterra kernel of
/// the limiting Y-equation.
pub fn semicircle_volterra_kernel(w: f64, h: f64, t_max: f64) -> Result<GridFunction> {
    let law = LimitLaw::semicircle(w * w)?;
    GridFunction::sample(h, t_max, |t| {
        2.0 * w * w * crate::laws::v_kernel(&law, t).expect("valid law")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn generalized_fourier_of_decaying_exponential() {
        // f(t) = e^{−t}: f̃(z) = i⁻¹/(iz + 1); at z = −i this is −i/2.
        let f = GridFunction::sample(1e-3, 25.0, |t| Complex64::new((-t).exp(), 0.0)).unwrap();
        let z = Complex64::new(0.0, -1.0);
        let val = generalized_fourier(&f, z).unwrap();
        let exact = (Complex64::i() * z + 1.0).inv() / Complex64::i();
        assert!((val - exact).norm() < 1e-6, "{val} vs {exact}");
        assert_abs_diff_eq!(exact.im, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(exact.re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn generalized_fourier_of_zero() {
        let f = GridFunction::sample(0.01, 10.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        let val = generalized_fourier(&f, Complex64::new(2.0, -1.0)).unwrap();
        assert_eq!(val, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn generalized_fourier_rejects_bad_arguments() {
        let f = GridFunction::sample(0.01, 5.0, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(generalized_fourier(&f, Complex64::new(0.0, 1.0)).is_err());
        // Tail too large: constant function at shallow decay.
        assert!(generalized_fourier(&f, Complex64::new(0.0, -1e-3)).is_err());
    }

    #[test]
    fn v_kernel_transform_is_stieltjes() {
        // v̂ = f: the transformed sampled kernel matches the closed form.
        let law = LimitLaw::semicircle(1.0).unwrap();
        let f = GridFunction::sample(1.0 / 400.0, 25.0, |t| {
            crate::laws::v_kernel(&law, t).unwrap()
        })
        .unwrap();
        let z = Complex64::new(1.0, -1.0);
        let val = generalized_fourier(&f, z).unwrap();
        let exact = crate::laws::stieltjes_limit(&law, z).unwrap();
        assert!((val - exact).norm() < 1e-5, "{val} vs {exact}");
    }

    #[test]
    fn convolution_theorem_for_v() {
        // (v*v) has transform i·f(z)² (Prop-style convolution identity).
        let law = LimitLaw::semicircle(1.0).unwrap();
        let h = 1.0 / 400.0;
        let v = GridFunction::sample(h, 25.0, |t| crate::laws::v_kernel(&law, t).unwrap())
            .unwrap();
        let conv = v.convolve(&v).unwrap();
        let z = Complex64::new(1.0, -1.0);
        let lhs = generalized_fourier(&conv, z).unwrap();
        let f = crate::laws::stieltjes_limit(&law, z).unwrap();
        let rhs = Complex64::i() * f * f;
        assert!((lhs - rhs).norm() < 1e-4, "{lhs} vs {rhs}");

        // Same statement for the closed-form vconv kernel.
        let vv =
            GridFunction::sample(h, 25.0, |t| crate::laws::vconv_kernel(t, 1.0).unwrap()).unwrap();
        let lhs2 = generalized_fourier(&vv, z).unwrap();
        assert!((lhs2 - rhs).norm() < 1e-4, "{lhs2} vs {rhs}");
    }

    #[test]
    fn volterra_zero_kernel_returns_rhs() {
        let h = 0.01;
        let q = GridFunction::sample(h, 5.0, |_| Complex64::new(0.0, 0.0)).unwrap();
        let r = GridFunction::sample(h, 5.0, |t| Complex64::new(t * t, -t)).unwrap();
        let p = solve_volterra(&q, &r).unwrap();
        for (pv, rv) in p.values().iter().zip(r.values()) {
            assert!((pv - rv).norm() < 1e-12);
        }
    }

    #[test]
    fn volterra_constant_kernel_sine_oracle() {
        // Q₁ ≡ q, R = t ⇒ P″ + qP = 0, P(0)=0, P′(0)=1 ⇒ P = sin(√q t)/√q.
        let q_const = 2.3;
        let h = 1e-3;
        let t_max = 5.0;
        let q = GridFunction::sample(h, t_max, |_| Complex64::new(q_const, 0.0)).unwrap();
        let r = GridFunction::sample(h, t_max, |t| Complex64::new(t, 0.0)).unwrap();
        let p = solve_volterra(&q, &r).unwrap();
        let rq = q_const.sqrt();
        let mut max_err = 0.0_f64;
        for (k, pv) in p.values().iter().enumerate() {
            let t = k as f64 * h;
            let exact = (rq * t).sin() / rq;
            max_err = max_err.max((pv.re - exact).abs().max(pv.im.abs()));
        }
        assert!(max_err < 1e-4, "max error {max_err}");
    }

    #[test]
    fn volterra_marching_is_second_order() {
        let q_const = 1.0;
        let t_max = 4.0;
        let err_at = |h: f64| {
            let q = GridFunction::sample(h, t_max, |_| Complex64::new(q_const, 0.0)).unwrap();
            let r = GridFunction::sample(h, t_max, |t| Complex64::new(t, 0.0)).unwrap();
            let p = solve_volterra(&q, &r).unwrap();
            p.values()
                .iter()
                .enumerate()
                .map(|(k, pv)| {
                    let t = k as f64 * h;
                    (pv.re - t.sin()).abs()
                })
                .fold(0.0_f64, f64::max)
        };
        let e1 = err_at(0.02);
        let e2 = err_at(0.01);
        let ratio = e1 / e2;
        assert!(
            (2.8..=5.5).contains(&ratio),
            "halving h gave ratio {ratio} (e1={e1:.3e}, e2={e2:.3e})"
        );
    }

    #[test]
    fn a_function_vanishes_for_constant_phi() {
        let law = LimitLaw::semicircle(1.0).unwrap();
        let a = a_function_grid(&TestFunction::constant(2.0), &law, 0.05, 3.0).unwrap();
        assert!(a.max_abs() < 1e-12);
        assert_eq!(
            a_function(0.0, &TestFunction::constant(2.0), &law).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn a_function_inner_integral_against_oscillatory_oracle() {
        // Inner integrand at t₁ = 1 for φ = λ²:
        // −(1/π)∫ e^{iλ}·2λ·√(4−λ²) dλ, cross-checked by fine Simpson with
        // the explicit square-root weight.
        let law = LimitLaw::semicircle(1.0).unwrap();
        let phi = TestFunction::monomial(2);
        let h = 1e-3;
        let a_grid = a_function_grid(&phi, &law, h, 0.1).unwrap();
        // Derivative of A at 0.05 ≈ inner(0.05): compare central difference
        // with the direct oscillatory quadrature.
        let inner_oracle = |t1: f64| {
            let n = 40_000;
            let mut acc = Complex64::new(0.0, 0.0);
            let lo = -2.0 + 1e-9;
            let hi = 2.0 - 1e-9;
            let step = (hi - lo) / n as f64;
            for k in 0..=n {
                let lam = lo + k as f64 * step;
                let weight = if k == 0 || k == n { 0.5 } else { 1.0 };
                acc += weight
                    * Complex64::from_polar(1.0, t1 * lam)
                    * (2.0 * lam * (4.0 - lam * lam).sqrt());
            }
            -acc * step / PI
        };
        let k = 1;
        let fd = (a_grid.values()[k + 1] - a_grid.values()[k - 1]) / (2.0 * h);
        let oracle = inner_oracle(k as f64 * h);
        assert!((fd - oracle).norm() < 1e-3, "{fd} vs {oracle}");

        // Pointwise route agrees with the grid route.
        let spot = a_function(0.1, &phi, &law).unwrap();
        let grid_end = *a_grid.values().last().unwrap();
        assert!((spot - grid_end).norm() < 1e-5);
    }

    #[test]
    fn closed_form_y_trivial_zeros() {
        let phi = TestFunction::poisson(0.0, 1.0).unwrap();
        assert_eq!(
            closed_form_y(1.0, 0.0, &phi, 1.0, 1.0, 64).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        assert_eq!(
            closed_form_y(0.0, 1.0, &phi, 1.0, 1.0, 64).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn volterra_route_matches_closed_form_y() {
        // Solve (Y + 2w² v**Y = xZA) and compare with the closed form.
        let w = 1.0;
        let phi = TestFunction::poisson(0.0, 1.0).unwrap();
        let h = DEFAULT_GRID_STEP;
        let t_max = 5.0;
        let (x, z) = (1.0, 1.0);
        let q = semicircle_volterra_kernel(w, h, t_max).unwrap();
        let r = wigner_forcing_grid(&phi, w, x, z, 0.0, 0.0, h, t_max).unwrap();
        let y = solve_volterra(&q, &r).unwrap();
        let mut sup = 0.0_f64;
        for (k, yv) in y.values().iter().enumerate() {
            let t = k as f64 * h;
            let closed = closed_form_y(x, t, &phi, w, z, 128).unwrap();
            sup = sup.max((yv - closed).norm());
        }
        assert!(sup < 1e-3, "sup difference {sup}");
    }

    #[test]
    fn limiting_z_values_and_residual() {
        assert_eq!(limiting_z(0.0, 3.0).unwrap().0, 1.0);
        assert_eq!(limiting_z(2.0, 0.0).unwrap().0, 1.0);
        let (z, res) = limiting_z(1.0, 4.0).unwrap();
        assert_abs_diff_eq!(z, (-2.0f64).exp(), epsilon = 1e-15);
        assert!(res < 1e-10, "residual {res}");
        assert!(limiting_z(1.0, -1.0).is_err());
    }

    #[test]
    fn recovered_z_derivative_matches_variance() {
        // Z′(x) = i∫φ̂ Y dt should equal −xVZ within 2% for the poisson φ.
        let w = 1.0;
        let phi = TestFunction::poisson(0.0, 1.0).unwrap();
        let v = crate::variance::variance_goe(&phi, w, 128).unwrap().total;
        let h = DEFAULT_GRID_STEP;
        let t_max = DEFAULT_GRID_HORIZON;
        let x = 1.0;
        let z = (-x * x * v / 2.0).exp();
        let q = semicircle_volterra_kernel(w, h, t_max).unwrap();
        let r = wigner_forcing_grid(&phi, w, x, z, 0.0, 0.0, h, t_max).unwrap();
        let y = solve_volterra(&q, &r).unwrap();
        let z_prime = z_derivative_from_y(&phi, &y).unwrap();
        let expected = -x * v * z;
        assert!(
            (z_prime - expected).abs() < 0.02 * expected.abs(),
            "Z' = {z_prime}, expected {expected}"
        );
    }

    #[test]
    fn kappa4_forcing_shifts_z_derivative() {
        // With the iκ₄BI(t) term added, Z′/(−xZ) recovers the Wigner
        // variance instead of the GOE one.
        let w = 1.0;
        let phi = TestFunction::poisson(0.0, 1.0).unwrap();
        let kappa4 = -1.2;
        let b = crate::variance::kappa4_constant_b(&phi, w, 128).unwrap();
        let v_wig = crate::variance::variance_wigner(&phi, w, kappa4, 128)
            .unwrap()
            .total;
        let h = DEFAULT_GRID_STEP;
        let t_max = DEFAULT_GRID_HORIZON;
        let x = 1.0;
        let z = (-x * x * v_wig / 2.0).exp();
        let q = semicircle_volterra_kernel(w, h, t_max).unwrap();
        let r = wigner_forcing_grid(&phi, w, x, z, kappa4, b, h, t_max).unwrap();
        let y = solve_volterra(&q, &r).unwrap();
        let z_prime = z_derivative_from_y(&phi, &y).unwrap();
        let expected = -x * v_wig * z;
        assert!(
            (z_prime - expected).abs() < 0.03 * expected.abs(),
            "Z' = {z_prime}, expected {expected}"
        );
    }
}
