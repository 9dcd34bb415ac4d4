//! Symmetric eigenvalue computation and per-sample spectral observables.
//!
//! The eigensolver reduces the matrix to tridiagonal form with Householder
//! reflections and then runs the implicitly shifted QL iteration, eigenvalues
//! only (no accumulation of transforms). Observables are plain symmetric
//! functions of the spectrum: linear statistics Σφ(λ), trace exponentials
//! Σe^{itλ}, empirical Stieltjes transforms n⁻¹Σ(λ−z)⁻¹, and binned
//! empirical measures.

use crate::ensembles::{EnsembleSpec, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::quad::kahan_sum;
use crate::testfns::TestFunction;
use num_complex::Complex64;

/// Relative symmetry tolerance accepted by the eigensolver.
const SYMMETRY_TOL: f64 = 1e-12;

/// Default relative eigenvalue accuracy target.
pub const DEFAULT_EIG_TOL: f64 = 1e-11;

/// The ascending spectrum of one sampled matrix, with provenance.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub ensemble: EnsembleSpec,
    pub seed: u64,
    pub replica: u64,
}

impl SpectrumSample {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Full ascending spectrum of a real symmetric matrix.
///
/// Each eigenvalue is accurate to tol·‖A‖ (default 1e−11). Inputs whose
/// symmetry defect exceeds 1e−12 relative to the largest entry are rejected.
pub fn eigenvalues_symmetric(a: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.max_abs();
    if a.symmetry_defect() > SYMMETRY_TOL * (1.0 + scale) {
        return Err(Error::argument(format!(
            "matrix is not symmetric within tolerance (defect {:.3e})",
            a.symmetry_defect()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::argument("eigenvalue tolerance must be positive"));
    }
    // Symmetrize exactly before reduction.
    let mut work = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            work[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let (mut d, mut e) = tridiagonalize(&mut work, n);
    ql_implicit(&mut d, &mut e, tol)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(d)
}

/// Householder reduction of a symmetric matrix (row-major, destroyed) to
/// tridiagonal form. Returns (diagonal, subdiagonal) with e[0] unused.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    (d, e)
}

/// Implicitly shifted QL iteration on a symmetric tridiagonal matrix given by
/// diagonal `d` and subdiagonal `e` (e[0] unused on input).
fn ql_implicit(d: &mut [f64], e: &mut [f64], tol: f64) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let threshold = tol.max(f64::EPSILON);
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Locate a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= threshold * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::numeric(format!(
                    "QL iteration failed to converge at index {l}"
                )));
            }
            // Wilkinson-style shift from the leading 2x2 block;
            // sign(g)·hypot(g, 1) keeps the denominator away from zero.
            let mut g = {
                let gg = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let rr = gg.hypot(1.0);
                let signed = if gg >= 0.0 { rr } else { -rr };
                d[m] - d[l] + e[l] / (gg + signed)
            };
            let mut r;
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Sum of φ over the spectrum, N_n[φ] = Σ φ(λ_l), with compensated summation
/// in ascending-eigenvalue order.
pub fn linear_statistic(sample: &SpectrumSample, phi: &TestFunction) -> f64 {
    kahan_sum(sample.eigenvalues.iter().map(|&l| phi.evaluate(l)))
}

/// Trace exponential u_n(t) = Σ e^{itλ_l}; |u_n(t)| ≤ n.
pub fn trace_exponential(sample: &SpectrumSample, t: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    let mut re_c = 0.0;
    let mut im_c = 0.0;
    for &l in &sample.eigenvalues {
        let (s, c) = (t * l).sin_cos();
        let y = c - re_c;
        let tr = re + y;
        re_c = (tr - re) - y;
        re = tr;
        let y = s - im_c;
        let ti = im + y;
        im_c = (ti - im) - y;
        im = ti;
    }
    Complex64::new(re, im)
}

/// Empirical Stieltjes transform g_n(z) = n⁻¹ Σ (λ_l − z)⁻¹ for Im z ≠ 0.
pub fn stieltjes_empirical(sample: &SpectrumSample, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::argument("stieltjes_empirical requires Im z ≠ 0"));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &l in &sample.eigenvalues {
        acc += 1.0 / (Complex64::new(l, 0.0) - z);
    }
    Ok(acc / sample.n() as f64)
}

/// Bin masses of the empirical eigenvalue measure over the partition given
/// by ascending `edges` (len = bins + 1). Masses sum to one; the partition
/// must cover the whole spectrum.
pub fn empirical_measure(sample: &SpectrumSample, edges: &[f64]) -> Result<Vec<f64>> {
    if edges.len() < 2 {
        return Err(Error::argument("need at least two bin edges"));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::argument("bin edges must be strictly ascending"));
    }
    let (lo, hi) = (edges[0], *edges.last().unwrap());
    let n = sample.n();
    if n == 0 {
        return Err(Error::argument("empty spectrum"));
    }
    let (min, max) = (sample.eigenvalues[0], sample.eigenvalues[n - 1]);
    if min < lo || max > hi {
        return Err(Error::argument(format!(
            "bins [{lo}, {hi}] do not cover the spectrum [{min}, {max}]"
        )));
    }
    let bins = edges.len() - 1;
    let mut counts = vec![0usize; bins];
    for &l in &sample.eigenvalues {
        // Last bin is closed on the right.
        let idx = match edges.binary_search_by(|e| e.partial_cmp(&l).unwrap()) {
            Ok(i) => i.min(bins - 1),
            Err(i) => i - 1,
        };
        counts[idx.min(bins - 1)] += 1;
    }
    Ok(counts.iter().map(|&c| c as f64 / n as f64).collect())
}

/// Consistency check of the spectrum against matrix traces:
/// |Σλ − Tr A| and |Σλ² − Tr A²| within small multiples of n·‖A‖.
pub fn check_trace_invariants(a: &SymmetricMatrix, eigenvalues: &[f64]) -> Result<()> {
    let n = a.dim() as f64;
    let norm = a.max_abs().max(1e-300) * a.dim() as f64; // crude ‖A‖ upper bound
    let sum: f64 = kahan_sum(eigenvalues.iter().copied());
    let sum_sq: f64 = kahan_sum(eigenvalues.iter().map(|&l| l * l));
    let tr = a.trace();
    let tr_sq = a.trace_of_square();
    if (sum - tr).abs() > 1e-10 * n * norm.max(1.0) {
        return Err(Error::numeric(format!(
            "trace invariant violated: Σλ = {sum}, Tr A = {tr}"
        )));
    }
    if (sum_sq - tr_sq).abs() > 1e-9 * n * (norm * norm).max(1.0) {
        return Err(Error::numeric(format!(
            "trace-square invariant violated: Σλ² = {sum_sq}, Tr A² = {tr_sq}"
        )));
    }
    Ok(())
}
