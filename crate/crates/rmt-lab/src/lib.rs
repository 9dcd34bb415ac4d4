//! # rmt-lab
//!
//! A numerical laboratory for spectral statistics of random matrices.
//!
//! The crate samples Wigner and sample-covariance ensembles, computes linear
//! eigenvalue statistics `N_n[φ] = Σ φ(λ_l)`, evaluates the limiting laws
//! (semicircle, Marchenko–Pastur) together with the closed-form variances of
//! the Gaussian fluctuation limits — including the fourth-cumulant
//! correction — and verifies by Monte Carlo that the fluctuations match the
//! predicted limits.
//!
//! Modules map onto the pipeline:
//!
//! - [`entrydist`]: scalar entry laws, moment/cumulant calculus, and the
//!   integration-by-parts (decoupling) formula check;
//! - [`ensembles`]: GOE / Wigner / Wishart / sample-covariance matrix
//!   generation and entry truncation;
//! - [`spectra`]: a symmetric eigensolver and the per-sample observables
//!   (linear statistics, trace exponentials, Stieltjes transforms);
//! - [`testfns`]: test functions φ with derivatives and closed-form Fourier
//!   transforms;
//! - [`laws`]: limiting densities, Stieltjes transforms, and the Fourier
//!   kernels v, v*v, T₁, A_κ₄ with Bessel-function oracles;
//! - [`variance`]: singular-weight quadrature for the limiting variance
//!   formulas V_GOE, V_Wig, V_Wish, V_SC;
//! - [`charflow`]: the characteristic-function machinery (generalized
//!   Fourier transform, Volterra solver, closed-form Y, Z-equation);
//! - [`montecarlo`]: replicated experiments, CLT reports, Lindeberg and
//!   a-priori-variance diagnostics;
//! - [`cli`]: configuration parsing and output writing for the `rmt-lab`
//!   binary.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `cargo run --example goe_clt` is a good starting point.

pub mod charflow;
pub mod cli;
pub mod ensembles;
pub mod entrydist;
pub mod error;
pub mod laws;
pub mod montecarlo;
pub mod spectra;
pub mod testfns;
pub mod variance;

pub(crate) mod quad;
pub(crate) mod seeding;

pub use error::{Error, Result};
