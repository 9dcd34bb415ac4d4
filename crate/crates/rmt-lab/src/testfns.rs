//! Test functions φ for linear eigenvalue statistics: pointwise value,
//! derivative, optional closed-form Fourier transform
//! `φ̂(t) = (1/2π) ∫ e^{−itλ} φ(λ) dλ`, and the smoothness norms
//! `∫ (1 + |t|^k) |φ̂(t)| dt`.

use crate::error::{Error, Result};
use crate::quad;
use num_complex::Complex64;
use std::sync::Arc;

/// Smoothness class of a test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    Polynomial,
    BoundedSmooth,
    PoissonKernel,
    Trig,
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type FourierFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// An evaluable test function with derivative and optional Fourier data.
///
/// Monomials are admitted even though the limit theorems assume bounded φ;
/// they enable exact-variance oracles. CLT reports flag statistics whose test
/// function falls outside the bounded-derivative hypotheses.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    class: ClassTag,
    eval: RealFn,
    deriv: RealFn,
    fourier: Option<FourierFn>,
    sup_deriv: Option<f64>,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("sup_deriv", &self.sup_deriv)
            .finish()
    }
}

impl TestFunction {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    pub fn evaluate(&self, lambda: f64) -> f64 {
        (self.eval)(lambda)
    }

    pub fn derivative(&self, lambda: f64) -> f64 {
        (self.deriv)(lambda)
    }

    /// Closed-form transform φ̂(t) when available.
    pub fn fourier(&self, t: f64) -> Option<Complex64> {
        self.fourier.as_ref().map(|f| f(t))
    }

    pub fn has_fourier(&self) -> bool {
        self.fourier.is_some()
    }

    /// sup over the real line of |φ′|, when finite and known.
    pub fn sup_deriv(&self) -> Option<f64> {
        self.sup_deriv
    }

    /// Whether φ satisfies the bounded-with-bounded-derivative hypothesis of
    /// the limit theorems.
    pub fn within_theorem_hypotheses(&self) -> bool {
        !matches!(self.class, ClassTag::Polynomial)
    }

    /// φ ≡ value.
    pub fn constant(value: f64) -> Self {
        TestFunction {
            name: format!("const({value})"),
            class: ClassTag::Polynomial,
            eval: Arc::new(move |_| value),
            deriv: Arc::new(|_| 0.0),
            fourier: None,
            sup_deriv: Some(0.0),
        }
    }

    /// φ(λ) = λ^k with exact derivative.
    pub fn monomial(k: u32) -> Self {
        TestFunction {
            name: format!("monomial({k})"),
            class: ClassTag::Polynomial,
            eval: Arc::new(move |x| x.powi(k as i32)),
            deriv: Arc::new(move |x| {
                if k == 0 {
                    0.0
                } else {
                    k as f64 * x.powi(k as i32 - 1)
                }
            }),
            fourier: None,
            sup_deriv: if k == 0 { Some(0.0) } else { None },
        }
    }

    /// Polynomial with ascending coefficients.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let c_eval = coeffs.clone();
        let c_deriv = coeffs.clone();
        TestFunction {
            name: format!("polynomial(degree {})", coeffs.len().saturating_sub(1)),
            class: ClassTag::Polynomial,
            eval: Arc::new(move |x| c_eval.iter().rev().fold(0.0, |acc, &c| acc * x + c)),
            deriv: Arc::new(move |x| {
                let mut acc = 0.0;
                for k in (1..c_deriv.len()).rev() {
                    acc = acc * x + k as f64 * c_deriv[k];
                }
                acc
            }),
            fourier: None,
            sup_deriv: None,
        }
    }

    /// Chebyshev polynomial T_k(λ/halfwidth), a polynomial adapted to the
    /// spectral interval [−halfwidth, halfwidth].
    pub fn chebyshev(k: u32, halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0) {
            return Err(Error::argument("chebyshev halfwidth must be positive"));
        }
        // T_k coefficients by the recurrence T_{k+1} = 2xT_k − T_{k−1}.
        let mut prev = vec![1.0];
        let mut cur = vec![0.0, 1.0];
        if k == 0 {
            cur = prev.clone();
        }
        for _ in 1..k.max(1) {
            let mut next = vec![0.0; cur.len() + 1];
            for (i, &c) in cur.iter().enumerate() {
                next[i + 1] += 2.0 * c;
            }
            for (i, &c) in prev.iter().enumerate() {
                next[i] -= c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        // Substitute x = λ/h.
        let coeffs: Vec<f64> = cur
            .iter()
            .enumerate()
            .map(|(i, &c)| c / halfwidth.powi(i as i32))
            .collect();
        let mut f = Self::polynomial(coeffs);
        f.name = format!("chebyshev({k}, {halfwidth})");
        Ok(f)
    }

    /// Gaussian bump exp(−(λ−center)²/(2 width²)).
    ///
    /// φ̂(t) = (width/√(2π)) e^{−width² t²/2} e^{−it·center}.
    pub fn gauss_bump(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::argument("gauss_bump width must be positive"));
        }
        let (c, s) = (center, width);
        let amp = s / (2.0 * std::f64::consts::PI).sqrt();
        // sup |φ′| at λ = center ± width: e^{−1/2}/width.
        let sup = (-0.5f64).exp() / s;
        Ok(TestFunction {
            name: format!("gauss_bump({c}, {s})"),
            class: ClassTag::BoundedSmooth,
            eval: Arc::new(move |x| (-((x - c) * (x - c)) / (2.0 * s * s)).exp()),
            deriv: Arc::new(move |x| {
                -(x - c) / (s * s) * (-((x - c) * (x - c)) / (2.0 * s * s)).exp()
            }),
            fourier: Some(Arc::new(move |t| {
                Complex64::from_polar(amp * (-(s * s * t * t) / 2.0).exp(), -t * c)
            })),
            sup_deriv: Some(sup),
        })
    }

    /// Poisson kernel η/((λ−E)² + η²).
    ///
    /// φ̂(t) = (1/2) e^{−η|t|} e^{−itE}; sup|φ′| = 3√3/(8η²).
    pub fn poisson(center: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::argument("poisson eta must be positive"));
        }
        let (e0, eta0) = (center, eta);
        // |φ′| maximal at λ − E = ±η/√3.
        let sup = 3.0 * 3f64.sqrt() / (8.0 * eta * eta);
        Ok(TestFunction {
            name: format!("poisson({e0}, {eta0})"),
            class: ClassTag::PoissonKernel,
            eval: Arc::new(move |x| {
                let d = x - e0;
                eta0 / (d * d + eta0 * eta0)
            }),
            deriv: Arc::new(move |x| {
                let d = x - e0;
                let den = d * d + eta0 * eta0;
                -2.0 * eta0 * d / (den * den)
            }),
            fourier: Some(Arc::new(move |t| {
                Complex64::from_polar(0.5 * (-eta0 * t.abs()).exp(), -t * e0)
            })),
            sup_deriv: Some(sup),
        })
    }

    /// φ(λ) = cos(t₀ λ). The transform is atomic (two point masses), so no
    /// integrable φ̂ is attached.
    pub fn cosine(t0: f64) -> Self {
        TestFunction {
            name: format!("cosine({t0})"),
            class: ClassTag::Trig,
            eval: Arc::new(move |x| (t0 * x).cos()),
            deriv: Arc::new(move |x| -t0 * (t0 * x).sin()),
            fourier: None,
            sup_deriv: Some(t0.abs()),
        }
    }

    /// Named constructor used by config files.
    pub fn builtin(name: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::argument(format!(
                    "test function {name} expects {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name {
            "const" => {
                need(1)?;
                Ok(Self::constant(params[0]))
            }
            "monomial" => {
                need(1)?;
                if params[0] < 0.0 || params[0].fract() != 0.0 {
                    return Err(Error::argument("monomial degree must be a nonnegative integer"));
                }
                Ok(Self::monomial(params[0] as u32))
            }
            "gauss_bump" => {
                need(2)?;
                Self::gauss_bump(params[0], params[1])
            }
            "poisson" => {
                need(2)?;
                Self::poisson(params[0], params[1])
            }
            "cosine" => {
                need(1)?;
                Ok(Self::cosine(params[0]))
            }
            "chebyshev" => {
                need(2)?;
                if params[0] < 0.0 || params[0].fract() != 0.0 {
                    return Err(Error::argument("chebyshev degree must be a nonnegative integer"));
                }
                Self::chebyshev(params[0] as u32, params[1])
            }
            other => Err(Error::argument(format!("unknown test function: {other}"))),
        }
    }

    /// αφ + ψ, combining Fourier data when both parts carry it.
    pub fn linear_combination(alpha: f64, phi: &TestFunction, psi: &TestFunction) -> Self {
        let (pe, pd) = (phi.eval.clone(), phi.deriv.clone());
        let (qe, qd) = (psi.eval.clone(), psi.deriv.clone());
        let fourier = match (&phi.fourier, &psi.fourier) {
            (Some(pf), Some(qf)) => {
                let (pf, qf) = (pf.clone(), qf.clone());
                Some(Arc::new(move |t: f64| alpha * pf(t) + qf(t)) as FourierFn)
            }
            _ => None,
        };
        let class = if phi.class == psi.class {
            phi.class
        } else {
            ClassTag::BoundedSmooth
        };
        TestFunction {
            name: format!("{}*{} + {}", alpha, phi.name, psi.name),
            class,
            eval: Arc::new(move |x| alpha * pe(x) + qe(x)),
            deriv: Arc::new(move |x| alpha * pd(x) + qd(x)),
            fourier,
            sup_deriv: None,
        }
    }

    /// α·φ.
    pub fn scaled(&self, alpha: f64) -> Self {
        Self::linear_combination(alpha, self, &Self::constant(0.0))
    }

    /// λ ↦ φ(sλ). The transform dilates as φ̂_s(t) = φ̂(t/s)/s.
    pub fn dilated(&self, s: f64) -> Result<Self> {
        if s == 0.0 {
            return Err(Error::argument("dilation factor must be nonzero"));
        }
        let (e, d) = (self.eval.clone(), self.deriv.clone());
        let fourier = self.fourier.as_ref().map(|f| {
            let f = f.clone();
            Arc::new(move |t: f64| f(t / s) / s.abs()) as FourierFn
        });
        Ok(TestFunction {
            name: format!("{}∘({s}λ)", self.name),
            class: self.class,
            eval: Arc::new(move |x| e(s * x)),
            deriv: Arc::new(move |x| s * d(s * x)),
            fourier,
            sup_deriv: self.sup_deriv.map(|v| v * s.abs()),
        })
    }

    /// Reconstructs φ(λ) from φ̂ by the inversion `φ(λ) = ∫ e^{itλ} φ̂(t) dt`,
    /// evaluated by quadrature. Returns `None` when no transform is attached.
    pub fn invert_fourier(&self, lambda: f64) -> Option<f64> {
        let f = self.fourier.as_ref()?;
        let integrand = |t: f64| {
            let phase = Complex64::from_polar(1.0, t * lambda);
            phase * f(t) + phase.conj() * f(-t)
        };
        let val = quad::integrate_halfline(integrand, 1e-10, 1e-13);
        Some(val.re)
    }
}

/// The Fourier norm ∫ (1 + |t|^k) |φ̂(t)| dt, or `None` when φ has no
/// integrable transform (polynomials, trigonometric functions).
pub fn fourier_norm(phi: &TestFunction, k: u32) -> Result<Option<f64>> {
    if !(2..=5).contains(&k) {
        return Err(Error::argument("fourier_norm order k must be in 2..=5"));
    }
    let Some(f) = phi.fourier.as_ref() else {
        return Ok(None);
    };
    let integrand = |t: f64| {
        let w = (1.0 + t.abs().powi(k as i32)) * (f(t).norm() + f(-t).norm());
        Complex64::new(w, 0.0)
    };
    let val = quad::integrate_halfline(integrand, 1e-11, 1e-13);
    Ok(Some(val.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtin_values() {
        let c = TestFunction::builtin("const", &[5.0]).unwrap();
        assert_eq!(c.evaluate(123.0), 5.0);
        assert_eq!(c.derivative(-1.0), 0.0);

        let m = TestFunction::builtin("monomial", &[2.0]).unwrap();
        assert_eq!(m.evaluate(3.0), 9.0);
        assert_eq!(m.derivative(3.0), 6.0);

        let p = TestFunction::builtin("poisson", &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(p.evaluate(0.0), 1.0);
        assert_abs_diff_eq!(p.evaluate(1.0), 0.5);

        assert!(TestFunction::builtin("nope", &[]).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let fns = [
            TestFunction::monomial(3),
            TestFunction::gauss_bump(0.3, 1.2).unwrap(),
            TestFunction::poisson(-0.5, 0.8).unwrap(),
            TestFunction::cosine(2.0),
            TestFunction::chebyshev(4, 2.0).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for f in &fns {
            for _ in 0..20 {
                let x = 4.0 * rng.random::<f64>() - 2.0;
                let h = 1e-5;
                let fd = (f.evaluate(x + h) - f.evaluate(x - h)) / (2.0 * h);
                let d = f.derivative(x);
                assert!(
                    (fd - d).abs() <= 1e-6 * (1.0 + d.abs()),
                    "{}: fd {} vs {}",
                    f.name(),
                    fd,
                    d
                );
            }
        }
    }

    #[test]
    fn fourier_inversion_reproduces_evaluate() {
        let fns = [
            TestFunction::gauss_bump(0.0, 1.0).unwrap(),
            TestFunction::gauss_bump(0.7, 0.9).unwrap(),
            TestFunction::poisson(0.0, 1.0).unwrap(),
            TestFunction::poisson(0.4, 1.5).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for f in &fns {
            for _ in 0..20 {
                let x = 6.0 * rng.random::<f64>() - 3.0;
                let inv = f.invert_fourier(x).unwrap();
                assert!(
                    (inv - f.evaluate(x)).abs() < 1e-6,
                    "{} at {x}: {} vs {}",
                    f.name(),
                    inv,
                    f.evaluate(x)
                );
            }
        }
    }

    #[test]
    fn linear_combination_preserves_inversion() {
        let f = TestFunction::linear_combination(
            2.0,
            &TestFunction::gauss_bump(0.0, 1.0).unwrap(),
            &TestFunction::poisson(0.0, 1.0).unwrap(),
        );
        for &x in &[-1.0, 0.0, 0.5, 2.0] {
            let inv = f.invert_fourier(x).unwrap();
            assert!((inv - f.evaluate(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn gauss_bump_norm_matches_closed_form() {
        // (1/√(2π)) ∫ (1+|t|⁵) e^{−t²/2} dt = 1 + 16/√(2π)
        let f = TestFunction::gauss_bump(0.0, 1.0).unwrap();
        let n5 = fourier_norm(&f, 5).unwrap().unwrap();
        let exact = 1.0 + 16.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert_abs_diff_eq!(n5, exact, epsilon = 1e-8);
    }

    #[test]
    fn poisson_norm_matches_closed_form() {
        // ∫ (1+|t|⁵)·(1/2)e^{−η|t|} dt = 1/η + 120/η⁶
        for &eta in &[1.0, 1.7] {
            let f = TestFunction::poisson(0.3, eta).unwrap();
            let n5 = fourier_norm(&f, 5).unwrap().unwrap();
            let exact = 1.0 / eta + 120.0 / eta.powi(6);
            assert!((n5 - exact).abs() < 1e-7 * exact, "{n5} vs {exact}");
        }
    }

    #[test]
    fn polynomial_norm_unavailable() {
        let f = TestFunction::monomial(2);
        assert!(fourier_norm(&f, 5).unwrap().is_none());
        assert!(fourier_norm(&f, 7).is_err());
    }

    #[test]
    fn poisson_sup_deriv_value() {
        let f = TestFunction::poisson(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(f.sup_deriv().unwrap(), 3.0 * 3f64.sqrt() / 8.0, epsilon = 1e-14);
        // Calculus oracle: scan the derivative numerically.
        let max = (-3000..3000)
            .map(|i| f.derivative(i as f64 * 1e-3).abs())
            .fold(0.0f64, f64::max);
        assert!((max - f.sup_deriv().unwrap()).abs() < 1e-5);
    }

    #[test]
    fn dilation_transforms_consistently() {
        let f = TestFunction::gauss_bump(0.0, 1.0).unwrap();
        let g = f.dilated(2.0).unwrap();
        assert_abs_diff_eq!(g.evaluate(0.5), f.evaluate(1.0), epsilon = 1e-15);
        for &x in &[-0.7, 0.2, 1.1] {
            let inv = g.invert_fourier(x).unwrap();
            assert!((inv - g.evaluate(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn chebyshev_matches_cos_identity() {
        // T_k(cos θ) = cos(kθ) on the scaled interval.
        let f = TestFunction::chebyshev(5, 2.0).unwrap();
        for &theta in &[0.3f64, 1.0, 2.2] {
            let x = 2.0 * theta.cos();
            assert_abs_diff_eq!(f.evaluate(x), (5.0 * theta).cos(), epsilon = 1e-12);
        }
    }
}
