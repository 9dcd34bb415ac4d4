//! Poincaré-type a-priori bounds on the variance of linear statistics:
//! Var{N_n[φ]} ≤ 2w²·sup|φ′|² for the GOE and ≤ 4a⁴c_n·sup|φ′|² for the
//! Wishart ensemble, checked empirically across matrix sizes.
//!
//! Run: cargo run --release --example apriori_bounds

use rmt_lab::ensembles::EnsembleSpec;
use rmt_lab::montecarlo::{
    apriori_bound_check, clt_report, run_experiment, theory_variance, BoundCheck,
    ExperimentConfig,
};
use rmt_lab::testfns::TestFunction;

fn main() -> rmt_lab::Result<()> {
    let phi = TestFunction::poisson(0.0, 1.0)?;
    println!(
        "Poisson kernel φ = η/((λ−E)²+η²) at (0,1): sup|φ′| = 3√3/8 = {:.6}\n",
        phi.sup_deriv().unwrap()
    );
    println!(
        "{:<10} {:>6} {:>14} {:>12} {:>8}",
        "family", "n", "sample_var", "bound", "holds"
    );
    for n in [64usize, 128, 256] {
        for (name, ensemble) in [
            ("GOE", EnsembleSpec::goe(n, 1.0)?),
            ("Wishart", EnsembleSpec::wishart(n, 2 * n, 1.0)?),
        ] {
            let config = ExperimentConfig {
                ensemble: ensemble.clone(),
                phi: phi.clone(),
                replicas: 400,
                n_grid: Vec::new(),
                base_seed: 10_000 + n as u64,
                workers: 0,
            };
            let result = run_experiment(&config)?;
            let theory = theory_variance(&ensemble, &phi, 128)?;
            let report = clt_report(n, &result.per_size[0].values, &theory, &phi)?;
            match apriori_bound_check(&report, &phi, &ensemble) {
                BoundCheck::Applicable {
                    bound,
                    sample_variance,
                    holds,
                    ..
                } => println!(
                    "{name:<10} {n:>6} {sample_variance:>14.5} {bound:>12.5} {holds:>8}"
                ),
                BoundCheck::NotApplicable { reason } => println!("{name:<10} {n:>6} {reason}"),
            }
        }
    }
    Ok(())
}
