//! Scalar integration helpers used by several modules: compensated summation,
//! uniform trapezoid/Simpson rules, and an adaptive Simpson routine for
//! smooth decaying integrands.

use num_complex::Complex64;

/// Neumaier compensated sum of an iterator of f64 terms.
pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Trapezoid rule over uniformly spaced samples with step `h`.
pub(crate) fn trapezoid_uniform(values: &[Complex64], h: f64) -> Complex64 {
    assert!(values.len() >= 2, "trapezoid needs at least two samples");
    let inner: Complex64 = values[1..values.len() - 1].iter().sum();
    (inner + 0.5 * (values[0] + values[values.len() - 1])) * h
}

/// Composite Simpson rule for `f` on [a, b] with `n` subintervals (n even).
pub(crate) fn simpson(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * (h / 3.0)
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// Recursion depth is capped; the worst surviving interval estimate is still
/// returned, which is adequate for the smooth kernels used here.
pub(crate) fn adaptive_simpson(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 30)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integrates `f` over [0, inf) by summing adaptive-Simpson results on dyadic
/// segments until a segment contributes less than `tail_tol` in magnitude.
pub(crate) fn integrate_halfline(
    f: impl Fn(f64) -> Complex64,
    seg_tol: f64,
    tail_tol: f64,
) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut a = 0.0;
    let mut b = 1.0;
    for _ in 0..64 {
        let seg = adaptive_simpson(&f, a, b, seg_tol);
        total += seg;
        if seg.norm() < tail_tol && b > 4.0 {
            break;
        }
        a = b;
        b *= 2.0;
    }
    total
}
