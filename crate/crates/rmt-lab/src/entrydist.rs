//! Scalar entry distributions: sampling, moment/cumulant bookkeeping, and a
//! Monte Carlo check of the integration-by-parts (decoupling) formula
//! `E{ξΦ(ξ)} = Σ_{l=0}^{p} κ_{l+1}/l! E{Φ^(l)(ξ)} + ε_p`.
//!
//! All built-in laws are centered; the second moment is the declared variance.
//! Moments are tracked to order 6, which covers every use in the crate
//! (the decoupling formula is applied with p ≤ 4).

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Highest moment/cumulant order tracked by [`EntryDistribution`].
pub const MAX_MOMENT_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    Gaussian,
    Rademacher,
    Uniform,
    CustomTable,
}

/// A centered scalar law with declared moments, used for matrix entries.
#[derive(Debug, Clone)]
pub struct EntryDistribution {
    kind: DistKind,
    variance: f64,
    /// Signed moments μ₁..μ₆.
    moments: [f64; MAX_MOMENT_ORDER],
    /// Absolute moments E{|ξ|ᵏ}, k = 1..6.
    abs_moments: [f64; MAX_MOMENT_ORDER],
    /// Support bound when compactly supported.
    bound: Option<f64>,
    /// Parameters needed for sampling.
    sampler: Sampler,
}

#[derive(Debug, Clone)]
enum Sampler {
    Gaussian { sd: f64 },
    Rademacher { scale: f64 },
    Uniform { halfwidth: f64 },
    Table { values: Vec<f64>, cumulative: Vec<f64> },
}

impl EntryDistribution {
    /// Centered Gaussian with the given variance.
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !(variance > 0.0) {
            return Err(Error::argument("variance must be positive"));
        }
        let w2 = variance;
        let moments = [0.0, w2, 0.0, 3.0 * w2 * w2, 0.0, 15.0 * w2 * w2 * w2];
        let sd = w2.sqrt();
        // E{|ξ|^k} = σ^k 2^{k/2} Γ((k+1)/2)/√π
        let mut abs_moments = [0.0; MAX_MOMENT_ORDER];
        for (k, m) in abs_moments.iter_mut().enumerate() {
            let kk = (k + 1) as f64;
            *m = sd.powf(kk) * 2f64.powf(kk / 2.0) * gamma_half_integer(kk + 1.0)
                / std::f64::consts::PI.sqrt();
        }
        Ok(Self {
            kind: DistKind::Gaussian,
            variance,
            moments,
            abs_moments,
            bound: None,
            sampler: Sampler::Gaussian { sd },
        })
    }

    /// ±scale with probability 1/2 each; variance = scale².
    pub fn rademacher(scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::argument("scale must be positive"));
        }
        let mut moments = [0.0; MAX_MOMENT_ORDER];
        let mut abs_moments = [0.0; MAX_MOMENT_ORDER];
        for k in 1..=MAX_MOMENT_ORDER {
            let p = scale.powi(k as i32);
            abs_moments[k - 1] = p;
            moments[k - 1] = if k % 2 == 0 { p } else { 0.0 };
        }
        Ok(Self {
            kind: DistKind::Rademacher,
            variance: scale * scale,
            moments,
            abs_moments,
            bound: Some(scale),
            sampler: Sampler::Rademacher { scale },
        })
    }

    /// Uniform on [-halfwidth, halfwidth]; variance = halfwidth²/3.
    pub fn uniform(halfwidth: f64) -> Result<Self> {
        if !(halfwidth > 0.0) {
            return Err(Error::argument("halfwidth must be positive"));
        }
        let h = halfwidth;
        let mut moments = [0.0; MAX_MOMENT_ORDER];
        let mut abs_moments = [0.0; MAX_MOMENT_ORDER];
        for k in 1..=MAX_MOMENT_ORDER {
            // E{|ξ|^k} = h^k/(k+1); signed moments vanish for odd k.
            let p = h.powi(k as i32) / (k as f64 + 1.0);
            abs_moments[k - 1] = p;
            moments[k - 1] = if k % 2 == 0 { p } else { 0.0 };
        }
        Ok(Self {
            kind: DistKind::Uniform,
            variance: h * h / 3.0,
            moments,
            abs_moments,
            bound: Some(h),
            sampler: Sampler::Uniform { halfwidth: h },
        })
    }

    /// Uniform law rescaled so its variance equals `variance`.
    pub fn uniform_with_variance(variance: f64) -> Result<Self> {
        if !(variance > 0.0) {
            return Err(Error::argument("variance must be positive"));
        }
        Self::uniform((3.0 * variance).sqrt())
    }

    /// Finite discrete law given as (value, probability) pairs.
    ///
    /// The law must be centered; moments are computed exactly from the table.
    pub fn custom_table(entries: &[(f64, f64)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::argument("table must be non-empty"));
        }
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        if entries.iter().any(|&(_, p)| p < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::argument(
                "table probabilities must be nonnegative and sum to 1",
            ));
        }
        let mean: f64 = entries.iter().map(|&(v, p)| v * p).sum();
        if mean.abs() > 1e-12 {
            return Err(Error::argument(format!(
                "table law must be centered (mean = {mean})"
            )));
        }
        let mut moments = [0.0; MAX_MOMENT_ORDER];
        let mut abs_moments = [0.0; MAX_MOMENT_ORDER];
        for k in 1..=MAX_MOMENT_ORDER {
            moments[k - 1] = entries.iter().map(|&(v, p)| v.powi(k as i32) * p).sum();
            abs_moments[k - 1] = entries
                .iter()
                .map(|&(v, p)| v.abs().powi(k as i32) * p)
                .sum();
        }
        let variance = moments[1];
        if !(variance > 0.0) {
            return Err(Error::argument("table law must have positive variance"));
        }
        let bound = entries
            .iter()
            .map(|&(v, _)| v.abs())
            .fold(0.0_f64, f64::max);
        let values: Vec<f64> = entries.iter().map(|&(v, _)| v).collect();
        let mut cumulative = Vec::with_capacity(entries.len());
        let mut acc = 0.0;
        for &(_, p) in entries {
            acc += p;
            cumulative.push(acc);
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self {
            kind: DistKind::CustomTable,
            variance,
            moments,
            abs_moments,
            bound: Some(bound),
            sampler: Sampler::Table { values, cumulative },
        })
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Support bound, when the law is compactly supported.
    pub fn bound(&self) -> Option<f64> {
        self.bound
    }

    /// Signed moment μ_k, 1 ≤ k ≤ 6.
    pub fn moment(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        if k > MAX_MOMENT_ORDER {
            return Err(Error::argument(format!(
                "moment order {k} exceeds tracked maximum {MAX_MOMENT_ORDER}"
            )));
        }
        Ok(self.moments[k - 1])
    }

    /// Absolute moment E{|ξ|^k}, 1 ≤ k ≤ 6.
    pub fn abs_moment(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        if k > MAX_MOMENT_ORDER {
            return Err(Error::argument(format!(
                "absolute moment order {k} exceeds tracked maximum {MAX_MOMENT_ORDER}"
            )));
        }
        Ok(self.abs_moments[k - 1])
    }

    /// Cumulants κ₁..κ_order of this law.
    pub fn cumulants(&self, order: usize) -> Result<Vec<f64>> {
        cumulants_from_moments(&self.moments[..order.min(MAX_MOMENT_ORDER)], order)
    }

    /// Fourth cumulant (excess) κ₄ = μ₄ − 3μ₂² for a centered law.
    pub fn kappa4(&self) -> f64 {
        self.moments[3] - 3.0 * self.variance * self.variance
    }

    /// The same law with all values multiplied by `s` (variance scales by s²).
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::argument("scale factor must be positive"));
        }
        match &self.sampler {
            Sampler::Gaussian { sd } => Self::gaussian((sd * s) * (sd * s)),
            Sampler::Rademacher { scale } => Self::rademacher(scale * s),
            Sampler::Uniform { halfwidth } => Self::uniform(halfwidth * s),
            Sampler::Table { values, cumulative } => {
                let mut entries = Vec::with_capacity(values.len());
                let mut prev = 0.0;
                for (v, c) in values.iter().zip(cumulative) {
                    entries.push((v * s, c - prev));
                    prev = *c;
                }
                Self::custom_table(&entries)
            }
        }
    }

    /// One i.i.d. draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.sampler {
            Sampler::Gaussian { sd } => sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng),
            Sampler::Rademacher { scale } => {
                if rng.random::<bool>() {
                    *scale
                } else {
                    -*scale
                }
            }
            Sampler::Uniform { halfwidth } => (2.0 * rng.random::<f64>() - 1.0) * halfwidth,
            Sampler::Table { values, cumulative } => {
                let u = rng.random::<f64>();
                let idx = cumulative.partition_point(|&c| c < u);
                values[idx.min(values.len() - 1)]
            }
        }
    }

    /// Exact tail second moment ∫_{|x|>s} x² dF.
    pub fn tail_second_moment(&self, s: f64) -> f64 {
        self.tail_moment(s, 2)
    }

    /// Exact tail fourth moment ∫_{|x|>s} x⁴ dF.
    pub fn tail_fourth_moment(&self, s: f64) -> f64 {
        self.tail_moment(s, 4)
    }

    fn tail_moment(&self, s: f64, k: u32) -> f64 {
        debug_assert!(k == 2 || k == 4);
        if s <= 0.0 {
            return self.abs_moments[k as usize - 1];
        }
        match &self.sampler {
            Sampler::Gaussian { sd } => {
                let u = s / sd;
                let pdf = (-(u * u) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
                let upper_tail = 0.5 * libm::erfc(u / std::f64::consts::SQRT_2);
                let unit = if k == 2 {
                    u * pdf + upper_tail
                } else {
                    (u * u * u + 3.0 * u) * pdf + 3.0 * upper_tail
                };
                2.0 * sd.powi(k as i32) * unit
            }
            Sampler::Rademacher { scale } => {
                if *scale > s {
                    scale.powi(k as i32)
                } else {
                    0.0
                }
            }
            Sampler::Uniform { halfwidth } => {
                let h = *halfwidth;
                if s >= h {
                    0.0
                } else {
                    let p = k as i32 + 1;
                    (h.powi(p) - s.powi(p)) / (p as f64 * h)
                }
            }
            Sampler::Table { values, cumulative } => {
                let mut acc = 0.0;
                let mut prev = 0.0;
                for (v, c) in values.iter().zip(cumulative) {
                    if v.abs() > s {
                        acc += v.powi(k as i32) * (c - prev);
                    }
                    prev = *c;
                }
                acc
            }
        }
    }
}

/// Γ(x) for half-integer x ≥ 1/2, used for Gaussian absolute moments.
fn gamma_half_integer(two_x: f64) -> f64 {
    // two_x = 2x; x = n or n + 1/2.
    let n = (two_x / 2.0).floor() as i64;
    if (two_x / 2.0 - n as f64).abs() < 1e-12 {
        (1..n).map(|k| k as f64).product::<f64>().max(1.0)
    } else {
        // Γ(n + 1/2) = (2n)!/(4^n n!) √π
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x + 1.0 <= two_x / 2.0 + 1e-12 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Cumulants κ₁..κ_order from signed moments μ₁..μ_order, by inverting the
/// recursion μ_{r+1} = Σ_{j=0}^{r} C(r,j) κ_{j+1} μ_{r−j}.
pub fn cumulants_from_moments(moments: &[f64], order: usize) -> Result<Vec<f64>> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::argument(format!(
            "cumulant order must be in 1..={MAX_MOMENT_ORDER}"
        )));
    }
    if moments.len() < order {
        return Err(Error::argument(format!(
            "need {order} moments, got {}",
            moments.len()
        )));
    }
    let mu = |k: usize| if k == 0 { 1.0 } else { moments[k - 1] };
    let mut kappa = Vec::with_capacity(order);
    for r in 0..order {
        // μ_{r+1} = Σ_{j=0}^{r-1} C(r,j) κ_{j+1} μ_{r−j} + κ_{r+1}
        let mut acc = 0.0;
        for (j, k) in kappa.iter().enumerate().take(r) {
            acc += binomial(r, j) * k * mu(r - j);
        }
        kappa.push(mu(r + 1) - acc);
    }
    Ok(kappa)
}

/// Moments μ₁..μ_order reconstructed from cumulants via the same recursion.
pub fn moments_from_cumulants(cumulants: &[f64], order: usize) -> Result<Vec<f64>> {
    if order == 0 || order > MAX_MOMENT_ORDER {
        return Err(Error::argument(format!(
            "moment order must be in 1..={MAX_MOMENT_ORDER}"
        )));
    }
    if cumulants.len() < order {
        return Err(Error::argument(format!(
            "need {order} cumulants, got {}",
            cumulants.len()
        )));
    }
    let mut mu: Vec<f64> = vec![1.0]; // μ₀
    for r in 0..order {
        let mut acc = 0.0;
        for j in 0..=r {
            acc += binomial(r, j) * cumulants[j] * mu[r - j];
        }
        mu.push(acc);
    }
    Ok(mu[1..].to_vec())
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// `count` i.i.d. draws from `dist`. Identical (seed, count) give identical output.
pub fn sample_entries<R: Rng + ?Sized>(
    dist: &EntryDistribution,
    rng: &mut R,
    count: usize,
) -> Vec<f64> {
    (0..count).map(|_| dist.sample(rng)).collect()
}

/// A scalar function with evaluable derivatives, for the decoupling check.
pub struct SmoothFn {
    pub name: &'static str,
    /// deriv(l, x) = Φ^(l)(x).
    deriv: Box<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    /// sup over the real line of |Φ^(l)|; f64::INFINITY when unbounded.
    sup: Box<dyn Fn(usize) -> f64 + Send + Sync>,
}

impl SmoothFn {
    /// Φ = sin; every derivative is bounded by 1.
    pub fn sin() -> Self {
        SmoothFn {
            name: "sin",
            deriv: Box::new(|l, x| match l % 4 {
                0 => x.sin(),
                1 => x.cos(),
                2 => -x.sin(),
                _ => -x.cos(),
            }),
            sup: Box::new(|_| 1.0),
        }
    }

    /// Polynomial with the given ascending coefficients.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        SmoothFn {
            name: "polynomial",
            deriv: Box::new(move |l, x| {
                if l > degree {
                    return 0.0;
                }
                // Coefficients of the l-th derivative, evaluated by Horner.
                let mut acc = 0.0;
                for k in (l..coeffs.len()).rev() {
                    let mut c = coeffs[k];
                    for j in 0..l {
                        c *= (k - j) as f64;
                    }
                    acc = acc * x + c;
                }
                acc
            }),
            sup: Box::new(move |l| if l > degree { 0.0 } else { f64::INFINITY }),
        }
    }

    pub fn eval_deriv(&self, l: usize, x: f64) -> f64 {
        (self.deriv)(l, x)
    }

    pub fn sup_deriv(&self, l: usize) -> f64 {
        (self.sup)(l)
    }
}

/// Outcome of the Monte Carlo decoupling check.
#[derive(Debug, Clone)]
pub struct DecouplingCheck {
    /// Monte Carlo estimate of E{ξΦ(ξ)}.
    pub lhs: f64,
    /// Standard error of the lhs estimator.
    pub lhs_se: f64,
    /// Σ_{l=0}^{p} κ_{l+1}/l! · MC estimate of E{Φ^(l)(ξ)}.
    pub rhs: f64,
    /// |lhs − rhs|.
    pub gap: f64,
    /// Standard error of the per-sample lhs − rhs difference.
    pub gap_se: f64,
    /// Remainder bound C_p · E{|ξ|^{p+2}} · sup|Φ^(p+1)|.
    pub bound: f64,
}

/// Monte Carlo verification of the decoupling formula at order `p`.
///
/// Both sides are estimated on the same sample stream so the reported gap
/// carries a meaningful standard error.
pub fn verify_decoupling<R: Rng + ?Sized>(
    dist: &EntryDistribution,
    phi: &SmoothFn,
    p: usize,
    samples: usize,
    rng: &mut R,
) -> Result<DecouplingCheck> {
    if p + 1 > MAX_MOMENT_ORDER {
        return Err(Error::argument(format!(
            "decoupling order p = {p} needs cumulants beyond order {MAX_MOMENT_ORDER}"
        )));
    }
    if p + 2 > MAX_MOMENT_ORDER {
        return Err(Error::argument(format!(
            "remainder bound needs absolute moment of order {} > {MAX_MOMENT_ORDER}",
            p + 2
        )));
    }
    if samples == 0 {
        return Err(Error::argument("samples must be positive"));
    }
    let kappa = dist.cumulants(p + 1)?;
    let mut weights = Vec::with_capacity(p + 1);
    let mut factorial = 1.0;
    for (l, k) in kappa.iter().enumerate() {
        if l > 0 {
            factorial *= l as f64;
        }
        weights.push(k / factorial);
    }

    let mut lhs_terms = Vec::with_capacity(samples);
    let mut lhs_sq = Vec::with_capacity(samples);
    let mut rhs_terms = Vec::with_capacity(samples);
    let mut diff_sq = Vec::with_capacity(samples);
    for _ in 0..samples {
        let xi = dist.sample(rng);
        let lhs_i = xi * phi.eval_deriv(0, xi);
        let rhs_i: f64 = weights
            .iter()
            .enumerate()
            .map(|(l, w)| w * phi.eval_deriv(l, xi))
            .sum();
        lhs_terms.push(lhs_i);
        lhs_sq.push(lhs_i * lhs_i);
        rhs_terms.push(rhs_i);
        diff_sq.push((lhs_i - rhs_i) * (lhs_i - rhs_i));
    }
    let n = samples as f64;
    let lhs = crate::quad::kahan_sum(lhs_terms) / n;
    let rhs = crate::quad::kahan_sum(rhs_terms) / n;
    let gap = (lhs - rhs).abs();
    let var_lhs = (crate::quad::kahan_sum(lhs_sq) / n - lhs * lhs).max(0.0) * n / (n - 1.0);
    let lhs_se = (var_lhs / n).sqrt();
    let mean_diff = lhs - rhs;
    let var_diff =
        (crate::quad::kahan_sum(diff_sq) / n - mean_diff * mean_diff).max(0.0) * n / (n - 1.0);
    let gap_se = (var_diff / n).sqrt();

    let c_p = (1.0 + ((3 + 2 * p) as f64).powi(p as i32 + 2))
        / (1..=(p as u64 + 1)).map(|k| k as f64).product::<f64>();
    let bound = c_p * dist.abs_moment(p + 2)? * phi.sup_deriv(p + 1);

    Ok(DecouplingCheck {
        lhs,
        lhs_se,
        rhs,
        gap,
        gap_se,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_cumulants_vanish_beyond_two() {
        let w2 = 1.7;
        let d = EntryDistribution::gaussian(w2).unwrap();
        let k = d.cumulants(6).unwrap();
        assert_abs_diff_eq!(k[0], 0.0);
        assert_abs_diff_eq!(k[1], w2, epsilon = 1e-14);
        for kj in &k[2..] {
            assert_abs_diff_eq!(*kj, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rademacher_kappa4_is_minus_two() {
        let d = EntryDistribution::rademacher(1.0).unwrap();
        let k = d.cumulants(4).unwrap();
        assert_abs_diff_eq!(k[3], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.kappa4(), -2.0, epsilon = 1e-14);
    }

    #[test]
    fn uniform_unit_variance_kappa4() {
        let d = EntryDistribution::uniform(3f64.sqrt()).unwrap();
        assert_abs_diff_eq!(d.variance(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.moment(4).unwrap(), 9.0 / 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.kappa4(), -6.0 / 5.0, epsilon = 1e-14);
    }

    #[test]
    fn moment_cumulant_round_trip() {
        // A deliberately skewed table law.
        let d = EntryDistribution::custom_table(&[(-1.0, 0.5), (0.5, 0.4), (3.0, 0.1)]).unwrap();
        let mu: Vec<f64> = (1..=6).map(|k| d.moment(k).unwrap()).collect();
        let kappa = cumulants_from_moments(&mu, 6).unwrap();
        let back = moments_from_cumulants(&kappa, 6).unwrap();
        for (m, b) in mu.iter().zip(&back) {
            assert!((m - b).abs() <= 1e-12 * (1.0 + m.abs()), "{m} vs {b}");
        }
    }

    #[test]
    fn kappa2_equals_variance_for_builtins() {
        for d in [
            EntryDistribution::gaussian(2.5).unwrap(),
            EntryDistribution::rademacher(1.3).unwrap(),
            EntryDistribution::uniform(0.8).unwrap(),
            EntryDistribution::custom_table(&[(-2.0, 0.2), (0.5, 0.8)]).unwrap(),
        ] {
            let k = d.cumulants(2).unwrap();
            assert_abs_diff_eq!(k[1], d.variance(), epsilon = 1e-13);
        }
    }

    #[test]
    fn sampling_is_deterministic_and_calibrated() {
        let d = EntryDistribution::rademacher(1.0).unwrap();
        let mut rng1 = ChaCha8Rng::seed_from_u64(42);
        let mut rng2 = ChaCha8Rng::seed_from_u64(42);
        let n = 100_000;
        let a = sample_entries(&d, &mut rng1, n);
        let b = sample_entries(&d, &mut rng2, n);
        assert_eq!(a, b);

        let var = a.iter().map(|x| x * x).sum::<f64>() / n as f64;
        // Variance of the variance estimator for a bounded law.
        assert!((var - 1.0).abs() < 3.0 * (2.0 / n as f64).sqrt());

        assert!(sample_entries(&d, &mut rng1, 0).is_empty());
    }

    #[test]
    fn empirical_mean_and_variance_converge() {
        for d in [
            EntryDistribution::gaussian(1.0).unwrap(),
            EntryDistribution::uniform(3f64.sqrt()).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let n = 200_000;
            let xs = sample_entries(&d, &mut rng, n);
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 / (n as f64).sqrt() * d.variance().sqrt());
            assert!((var - d.variance()).abs() < 5.0 * (3.0 / n as f64).sqrt());
        }
    }

    #[test]
    fn gaussian_tail_moments_match_brute_force() {
        let d = EntryDistribution::gaussian(1.0).unwrap();
        // Brute-force tail moments by quadrature.
        let s = 1.4;
        let pdf = |x: f64| (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut t2 = 0.0;
        let mut t4 = 0.0;
        let h = 1e-4;
        let mut x = s;
        while x < 12.0 {
            let mid = x + 0.5 * h;
            t2 += mid * mid * pdf(mid) * h;
            t4 += mid * mid * mid * mid * pdf(mid) * h;
            x += h;
        }
        assert!((d.tail_second_moment(s) - 2.0 * t2).abs() < 1e-5);
        assert!((d.tail_fourth_moment(s) - 2.0 * t4).abs() < 1e-4);
    }

    #[test]
    fn decoupling_gaussian_sin_matches_stein() {
        // For standard Gaussian, E{ξ sin ξ} = E{cos ξ} = e^{-1/2} exactly.
        let d = EntryDistribution::gaussian(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let chk = verify_decoupling(&d, &SmoothFn::sin(), 1, 200_000, &mut rng).unwrap();
        let exact = (-0.5f64).exp();
        assert!(
            (chk.lhs - exact).abs() < 4.0 / (200_000f64).sqrt(),
            "lhs {} vs {}",
            chk.lhs,
            exact
        );
        assert!(chk.gap <= 4.0 * chk.gap_se + 1e-12, "{chk:?}");
    }

    #[test]
    fn decoupling_exact_for_polynomials() {
        let d = EntryDistribution::uniform(3f64.sqrt()).unwrap();
        let phi = SmoothFn::polynomial(vec![0.5, -2.0, 0.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let chk = verify_decoupling(&d, &phi, 3, 100_000, &mut rng).unwrap();
        assert!(chk.gap <= 4.0 * chk.gap_se + 1e-12, "{chk:?}");
        // Degree ≤ p makes the remainder bound exactly zero.
        assert_eq!(chk.bound, 0.0);
    }

    #[test]
    fn decoupling_remainder_within_bound() {
        let d = EntryDistribution::rademacher(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chk = verify_decoupling(&d, &SmoothFn::sin(), 2, 100_000, &mut rng).unwrap();
        assert!(chk.gap <= chk.bound + 3.0 * chk.gap_se, "{chk:?}");
        // Both sides are constant per sample for ±1 entries (gap_se = 0), so
        // the gap is exactly |sin 1 − cos 1|.
        let exact = (1f64.sin() - 1f64.cos()).abs();
        assert!((chk.gap - exact).abs() <= 4.0 * chk.gap_se + 1e-12);
    }

    #[test]
    fn decoupling_gap_shrinks_like_sqrt_samples() {
        let d = EntryDistribution::gaussian(1.0).unwrap();
        let exact = (-0.5f64).exp();
        let mut errs = Vec::new();
        for &n in &[4_000usize, 64_000] {
            // Average |lhs − exact| over independent repetitions.
            let mut acc = 0.0;
            let reps = 20;
            for r in 0..reps {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + r);
                let chk = verify_decoupling(&d, &SmoothFn::sin(), 1, n, &mut rng).unwrap();
                acc += (chk.lhs - exact).abs();
            }
            errs.push(acc / reps as f64);
        }
        // 16x the samples should shrink the error by roughly 4x; allow slack.
        assert!(
            errs[1] < errs[0] / 2.0,
            "errors did not shrink: {errs:?}"
        );
    }

    #[test]
    fn invalid_arguments_are_rejected() {
        assert!(EntryDistribution::gaussian(0.0).is_err());
        assert!(EntryDistribution::custom_table(&[(1.0, 0.7), (-1.0, 0.2)]).is_err());
        assert!(cumulants_from_moments(&[0.0, 1.0], 4).is_err());
        let d = EntryDistribution::gaussian(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(verify_decoupling(&d, &SmoothFn::sin(), 5, 10, &mut rng).is_err());
    }
}
