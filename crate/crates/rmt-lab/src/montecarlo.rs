//! Replicated Monte Carlo experiments and CLT diagnostics.
//!
//! Each replica draws its matrix from an rng seeded by a fixed mix of
//! (base seed, n, replica index), computes the spectrum, and evaluates the
//! linear statistic. Replicas run in parallel; aggregation is an ordered
//! reduction over replica indices, so reports are bit-identical for any
//! worker count.

use crate::ensembles::{sample_matrix, EnsembleSpec, Family};
use crate::entrydist::EntryDistribution;
use crate::error::{Error, Result};
use crate::quad::kahan_sum;
use crate::seeding::replica_seed;
use crate::spectra::{eigenvalues_symmetric, linear_statistic, SpectrumSample, DEFAULT_EIG_TOL};
use crate::testfns::TestFunction;
use crate::variance::VarianceResult;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Statistic values and provenance for one matrix size.
#[derive(Debug, Clone)]
pub struct SizeResult {
    pub n: usize,
    /// One linear-statistic value per replica, in replica order.
    pub values: Vec<f64>,
}

/// Raw experiment output across the n-grid.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub base_seed: u64,
    pub per_size: Vec<SizeResult>,
}

/// A replicated-sampling experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub phi: TestFunction,
    pub replicas: usize,
    /// Ascending list of matrix sizes; the ensemble's own n is used when empty.
    pub n_grid: Vec<usize>,
    pub base_seed: u64,
    /// Worker threads; 0 means the rayon default.
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicas < 2 {
            return Err(Error::config("replicas must be at least 2"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("n_grid must be strictly ascending"));
        }
        Ok(())
    }

    fn sizes(&self) -> Vec<usize> {
        if self.n_grid.is_empty() {
            vec![self.ensemble.dim()]
        } else {
            self.n_grid.clone()
        }
    }
}

/// Draws the spectrum for one (n, replica) cell.
pub fn sample_spectrum(
    ensemble: &EnsembleSpec,
    base_seed: u64,
    replica: u64,
) -> Result<SpectrumSample> {
    let seed = replica_seed(base_seed, ensemble.dim() as u64, replica);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = sample_matrix(ensemble, &mut rng)?;
    let eigenvalues = eigenvalues_symmetric(&matrix, DEFAULT_EIG_TOL).map_err(|e| {
        Error::numeric(format!(
            "eigensolver failed at n = {}, replica = {replica}: {e}",
            ensemble.dim()
        ))
    })?;
    Ok(SpectrumSample {
        eigenvalues,
        ensemble: ensemble.clone(),
        seed,
        replica,
    })
}

fn run_replicas<T: Send>(
    workers: usize,
    replicas: usize,
    job: impl Fn(u64) -> Result<T> + Send + Sync,
) -> Result<Vec<T>> {
    let run = || -> Result<Vec<T>> {
        (0..replicas as u64)
            .into_par_iter()
            .map(&job)
            .collect::<Result<Vec<T>>>()
    };
    if workers == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::numeric(format!("thread pool: {e}")))?;
        pool.install(run)
    }
}

/// Runs the experiment: for every n and replica, sample, solve, and evaluate
/// N_n[φ]. Output is identical regardless of worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let mut per_size = Vec::new();
    for n in config.sizes() {
        let ensemble = config.ensemble.with_dim(n)?;
        let phi = config.phi.clone();
        let values = run_replicas(config.workers, config.replicas, move |r| {
            let spectrum = sample_spectrum(&ensemble, config.base_seed, r)?;
            Ok(linear_statistic(&spectrum, &phi))
        })?;
        per_size.push(SizeResult { n, values });
    }
    Ok(ExperimentResult {
        base_seed: config.base_seed,
        per_size,
    })
}

/// Runs the experiment keeping whole spectra (for observables beyond N_n[φ]).
pub fn run_spectra(
    ensemble: &EnsembleSpec,
    replicas: usize,
    base_seed: u64,
    workers: usize,
) -> Result<Vec<SpectrumSample>> {
    run_replicas(workers, replicas, move |r| {
        sample_spectrum(ensemble, base_seed, r)
    })
}

/// Aggregated CLT diagnostics for one matrix size.
#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub replicas: usize,
    pub sample_mean: f64,
    /// Unbiased sample variance of the statistic.
    pub sample_variance: f64,
    /// Gaussian-limit standard error of the sample variance,
    /// sample_variance·√(2/(R−1)); approximate by construction.
    pub variance_se: f64,
    pub theory_total: f64,
    pub theory_gaussian_part: f64,
    pub theory_kappa4_part: f64,
    /// Kolmogorov–Smirnov statistic of standardized samples against the unit
    /// Gaussian; `None` when the theory variance is degenerate.
    pub ks_statistic: Option<f64>,
    /// Asymptotic KS p-value.
    pub ks_p_value: Option<f64>,
    pub excess_kurtosis: f64,
    /// sup over x ∈ [−3, 3] of |Ẑ(x) − e^{−x²V/2}|.
    pub ecf_deviation: Option<f64>,
    /// Set when V = 0 and distributional tests are skipped.
    pub degenerate: bool,
    /// Set when the test function is outside the bounded-derivative
    /// hypotheses of the limit theorems (polynomials).
    pub outside_hypotheses: bool,
}

/// Builds the CLT report for one batch of replica statistics against a
/// theoretical variance.
pub fn clt_report(n: usize, samples: &[f64], theory: &VarianceResult, phi: &TestFunction) -> Result<CltReport> {
    let r = samples.len();
    if r < 2 {
        return Err(Error::argument("need at least two replicas"));
    }
    let rf = r as f64;
    let mean = kahan_sum(samples.iter().copied()) / rf;
    let centered: Vec<f64> = samples.iter().map(|s| s - mean).collect();
    let m2 = kahan_sum(centered.iter().map(|c| c * c)) / rf;
    let m4 = kahan_sum(centered.iter().map(|c| c * c * c * c)) / rf;
    let sample_variance = m2 * rf / (rf - 1.0);
    let variance_se = sample_variance * (2.0 / (rf - 1.0)).sqrt();
    let excess_kurtosis = if m2 > 0.0 { m4 / (m2 * m2) - 3.0 } else { 0.0 };

    let degenerate = theory.total <= 1e-15;
    let (ks_statistic, ks_p_value, ecf_deviation) = if degenerate {
        (None, None, None)
    } else {
        let ks = ks_against_gaussian(&centered, theory.total);
        let p = ks_p_value_asymptotic(ks, r);
        let ecf = ecf_deviation(&centered, theory.total);
        (Some(ks), Some(p), Some(ecf))
    };

    Ok(CltReport {
        n,
        replicas: r,
        sample_mean: mean,
        sample_variance,
        variance_se,
        theory_total: theory.total,
        theory_gaussian_part: theory.gaussian_part,
        theory_kappa4_part: theory.kappa4_part,
        ks_statistic,
        ks_p_value,
        excess_kurtosis,
        ecf_deviation,
        degenerate,
        outside_hypotheses: !phi.within_theorem_hypotheses(),
    })
}

/// Standard normal CDF.
fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov statistic of `centered` samples standardized by √v
/// against the standard normal.
pub fn ks_against_gaussian(centered: &[f64], v: f64) -> f64 {
    let mut std: Vec<f64> = centered.iter().map(|c| c / v.sqrt()).collect();
    std.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let n = std.len() as f64;
    let mut sup = 0.0_f64;
    for (i, &x) in std.iter().enumerate() {
        let cdf = normal_cdf(x);
        sup = sup.max((cdf - i as f64 / n).abs());
        sup = sup.max(((i + 1) as f64 / n - cdf).abs());
    }
    sup
}

/// Asymptotic Kolmogorov p-value P(D > d) = 2 Σ (−1)^{k−1} e^{−2k²nd²}.
pub fn ks_p_value_asymptotic(d: f64, n: usize) -> f64 {
    let lambda = (n as f64).sqrt() * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..101 {
        let term = (-2.0 * (k as f64) * (k as f64) * lambda * lambda).exp();
        p += if k % 2 == 1 { term } else { -term };
    }
    (2.0 * p).clamp(0.0, 1.0)
}

/// Empirical characteristic-function deviation
/// sup_{x ∈ [−3,3]} |R⁻¹ Σ e^{ix(S_r − mean)} − e^{−x²V/2}| on a 61-point grid.
pub fn ecf_deviation(centered: &[f64], v: f64) -> f64 {
    let r = centered.len() as f64;
    let mut sup = 0.0_f64;
    for i in 0..=60 {
        let x = -3.0 + i as f64 * 0.1;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in centered {
            acc += Complex64::from_polar(1.0, x * c);
        }
        let ecf = acc / r;
        let limit = (-x * x * v / 2.0).exp();
        sup = sup.max((ecf - limit).norm());
    }
    sup
}

/// Empirical correlator Y_n(x,t): mean over replicas of u°(t)·e^{ixN°[φ]}
/// with both factors centered by their replica means.
pub fn empirical_y(
    spectra: &[SpectrumSample],
    phi: &TestFunction,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    if spectra.len() < 2 {
        return Err(Error::argument("need at least two replicas"));
    }
    let r = spectra.len() as f64;
    let u: Vec<Complex64> = spectra
        .iter()
        .map(|s| crate::spectra::trace_exponential(s, t))
        .collect();
    let stats: Vec<f64> = spectra.iter().map(|s| linear_statistic(s, phi)).collect();
    let u_mean = u.iter().sum::<Complex64>() / r;
    let s_mean = kahan_sum(stats.iter().copied()) / r;
    let mut acc = Complex64::new(0.0, 0.0);
    for (uv, sv) in u.iter().zip(&stats) {
        acc += (uv - u_mean) * Complex64::from_polar(1.0, x * (sv - s_mean));
    }
    Ok(acc / r)
}

/// Lindeberg tail functionals for an entry law at truncation level τ√n:
/// L2 = n⁻² Σ ∫_{|W|>τ√n} W² dF and L4 with the fourth power. The entry
/// count is n² for Wigner families and m·n for covariance families.
///
/// Computed analytically from the law's tails (exact for bounded laws,
/// erfc-based for Gaussian). The distinct diagonal law of Wigner matrices
/// contributes O(1/n) and is ignored.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LindebergDiagnostics {
    pub l2: f64,
    pub l4: f64,
}

pub fn lindeberg_diagnostics(
    dist: &EntryDistribution,
    n: usize,
    m: Option<usize>,
    tau: f64,
) -> Result<LindebergDiagnostics> {
    if !(tau > 0.0) {
        return Err(Error::argument("tau must be positive"));
    }
    if n == 0 {
        return Err(Error::argument("n must be positive"));
    }
    let level = tau * (n as f64).sqrt();
    let entry_count = match m {
        Some(m) => (m * n) as f64,
        None => (n * n) as f64,
    };
    let norm = entry_count / (n * n) as f64;
    Ok(LindebergDiagnostics {
        l2: norm * dist.tail_second_moment(level),
        l4: norm * dist.tail_fourth_moment(level),
    })
}

/// Outcome of the a-priori variance bound check.
#[derive(Debug, Clone, Serialize)]
pub enum BoundCheck {
    Applicable {
        bound: f64,
        sample_variance: f64,
        holds: bool,
        /// bound·(1+slack) − sample_variance.
        margin: f64,
    },
    /// No explicit constant is available for this family/test function.
    NotApplicable { reason: String },
}

/// Checks the Poincaré-type a-priori bound Var{N_n[φ]} ≤ bound against the
/// sampled variance, with slack 3·relative-SE for finite replica counts.
///
/// Explicit constants exist only for the Gaussian families:
/// 2w²·sup|φ′|² (GOE) and 4a⁴c_n·sup|φ′|² (Wishart). The non-Gaussian
/// Fourier-norm bounds carry unspecified constants and report NotApplicable.
pub fn apriori_bound_check(
    report: &CltReport,
    phi: &TestFunction,
    spec: &EnsembleSpec,
) -> BoundCheck {
    let Some(sup) = phi.sup_deriv() else {
        return BoundCheck::NotApplicable {
            reason: format!("sup|φ′| unavailable for {}", phi.name()),
        };
    };
    let bound = match spec {
        EnsembleSpec::Goe { w2, .. } => 2.0 * w2 * sup * sup,
        EnsembleSpec::Wishart { a2, .. } => {
            let c_n = spec.aspect_ratio().expect("covariance family");
            4.0 * a2 * a2 * c_n * sup * sup
        }
        EnsembleSpec::Wigner { .. } | EnsembleSpec::SampleCovariance { .. } => {
            return BoundCheck::NotApplicable {
                reason: format!(
                    "no explicit a-priori constant for non-Gaussian {} entries",
                    spec.family()
                ),
            };
        }
    };
    let rel_se = if report.sample_variance > 0.0 {
        report.variance_se / report.sample_variance
    } else {
        0.0
    };
    let slackened = bound * (1.0 + 3.0 * rel_se);
    BoundCheck::Applicable {
        bound,
        sample_variance: report.sample_variance,
        holds: report.sample_variance <= slackened,
        margin: slackened - report.sample_variance,
    }
}

/// Convenience: theoretical variance for an ensemble/test-function pairing.
pub fn theory_variance(
    spec: &EnsembleSpec,
    phi: &TestFunction,
    order: usize,
) -> Result<VarianceResult> {
    match spec {
        EnsembleSpec::Goe { w2, .. } => crate::variance::variance_goe(phi, w2.sqrt(), order),
        EnsembleSpec::Wigner { w2, offdiag, .. } => {
            crate::variance::variance_wigner(phi, w2.sqrt(), offdiag.kappa4(), order)
        }
        EnsembleSpec::Wishart { a2, .. } => {
            let c = spec.aspect_ratio().expect("covariance family");
            crate::variance::variance_wishart(phi, a2.sqrt(), c, order)
        }
        EnsembleSpec::SampleCovariance { a2, entries, .. } => {
            let c = spec.aspect_ratio().expect("covariance family");
            crate::variance::variance_sample_covariance(
                phi,
                a2.sqrt(),
                c,
                entries.kappa4(),
                order,
            )
        }
    }
}

/// Family tag for matching diagnostics (used by the CLI layer).
pub fn family_of(spec: &EnsembleSpec) -> Family {
    spec.family()
}
