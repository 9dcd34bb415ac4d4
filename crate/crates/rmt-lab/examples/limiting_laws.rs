//! Convergence of empirical spectra to the semicircle and Marchenko–Pastur
//! laws: histogram L1 distances at n = 1024 and the empirical Stieltjes
//! transform g_n(i) against the closed form f(i) = i(√5−1)/2.
//!
//! Run: cargo run --release --example limiting_laws

use num_complex::Complex64;
use rmt_lab::ensembles::EnsembleSpec;
use rmt_lab::laws::{self, LimitLaw};
use rmt_lab::montecarlo::run_spectra;
use rmt_lab::spectra::{empirical_measure, stieltjes_empirical, SpectrumSample};

fn histogram_l1(sample: &SpectrumSample, law: &LimitLaw, bins: usize) -> f64 {
    let (lo, hi) = law.support();
    let mut edges: Vec<f64> = (0..=bins)
        .map(|k| lo + (hi - lo) * k as f64 / bins as f64)
        .collect();
    // Widen the outer bins to cover edge fluctuations; the density is zero
    // outside the support, so the expected masses are unchanged.
    edges[0] = edges[0].min(sample.eigenvalues[0] - 1e-9);
    let last = edges.len() - 1;
    edges[last] = edges[last].max(sample.eigenvalues[sample.n() - 1] + 1e-9);
    let masses = empirical_measure(sample, &edges).expect("edges cover spectrum");
    masses
        .iter()
        .enumerate()
        .map(|(k, mass)| {
            let expected = bin_mass(law, edges[k], edges[k + 1]);
            (mass - expected).abs()
        })
        .sum()
}

fn bin_mass(law: &LimitLaw, lo: f64, hi: f64) -> f64 {
    let (a, b) = law.support();
    let (lo, hi) = (lo.max(a), hi.min(b));
    if hi <= lo {
        return 0.0;
    }
    let n = 2000;
    let h = (hi - lo) / n as f64;
    (0..n)
        .map(|k| laws::density(law, lo + (k as f64 + 0.5) * h) * h)
        .sum()
}

fn main() -> rmt_lab::Result<()> {
    let n = 1024;

    let goe = EnsembleSpec::goe(n, 1.0)?;
    let scl = LimitLaw::semicircle(1.0)?;
    let spectra = run_spectra(&goe, 1, 501, 0)?;
    println!(
        "semicircle histogram L1 (n = {n}, 60 bins): {:.4}",
        histogram_l1(&spectra[0], &scl, 60)
    );

    let wishart = EnsembleSpec::wishart(n, 2 * n, 1.0)?;
    let mp = LimitLaw::marchenko_pastur(1.0, 2.0)?;
    let spectra = run_spectra(&wishart, 1, 502, 0)?;
    println!(
        "Marchenko–Pastur histogram L1 (c = 2): {:.4}",
        histogram_l1(&spectra[0], &mp, 60)
    );

    let replicas = 50;
    let spectra = run_spectra(&goe, replicas, 503, 0)?;
    let z = Complex64::new(0.0, 1.0);
    let mean: Complex64 = spectra
        .iter()
        .map(|s| stieltjes_empirical(s, z).expect("Im z ≠ 0"))
        .sum::<Complex64>()
        / replicas as f64;
    let exact = laws::stieltjes_limit(&scl, z)?;
    println!(
        "mean g_n(i) over {replicas} replicas: {:.5}{:+.5}i  (closed form f(i) = {:.5}i)",
        mean.re, mean.im, exact.im
    );
    Ok(())
}
