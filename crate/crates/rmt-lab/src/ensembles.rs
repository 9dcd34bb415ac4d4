//! Random-matrix ensembles: GOE, general Wigner, Wishart, and sample
//! covariance, plus entry truncation.
//!
//! Wigner-family matrices are M = n^{-1/2} W with independent entries above
//! the diagonal, off-diagonal variance w² and diagonal variance 2w².
//! Covariance-family matrices are M = n^{-1} XᵀX for an m×n data matrix X
//! with i.i.d. entries of variance a²; these are positive semidefinite by
//! construction.
//!
//! Entries are generated in a fixed row-major order so a replica's matrix is
//! a pure function of its seed, independent of thread scheduling.

use crate::entrydist::EntryDistribution;
use crate::error::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Goe,
    Wigner,
    Wishart,
    SampleCovariance,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Goe => "GOE",
            Family::Wigner => "Wigner",
            Family::Wishart => "Wishart",
            Family::SampleCovariance => "SampleCovariance",
        };
        f.write_str(s)
    }
}

/// A fully specified matrix ensemble.
#[derive(Debug, Clone)]
pub enum EnsembleSpec {
    Goe {
        n: usize,
        w2: f64,
    },
    Wigner {
        n: usize,
        w2: f64,
        offdiag: EntryDistribution,
        diag: EntryDistribution,
    },
    Wishart {
        n: usize,
        m: usize,
        a2: f64,
    },
    SampleCovariance {
        n: usize,
        m: usize,
        a2: f64,
        entries: EntryDistribution,
    },
}

impl EnsembleSpec {
    pub fn goe(n: usize, w2: f64) -> Result<Self> {
        check_n(n)?;
        check_scale(w2, "w2")?;
        Ok(EnsembleSpec::Goe { n, w2 })
    }

    /// Wigner ensemble from an off-diagonal law with variance w². The
    /// diagonal law defaults to the off-diagonal law rescaled to variance
    /// 2w²; the limit theorems do not depend on the diagonal entries.
    pub fn wigner(n: usize, offdiag: EntryDistribution, diag: Option<EntryDistribution>) -> Result<Self> {
        check_n(n)?;
        let w2 = offdiag.variance();
        let diag = match diag {
            Some(d) => {
                if (d.variance() - 2.0 * w2).abs() > 1e-10 * (1.0 + 2.0 * w2) {
                    return Err(Error::argument(format!(
                        "diagonal variance {} must equal 2·w² = {}",
                        d.variance(),
                        2.0 * w2
                    )));
                }
                d
            }
            None => offdiag.scaled(std::f64::consts::SQRT_2)?,
        };
        Ok(EnsembleSpec::Wigner {
            n,
            w2,
            offdiag,
            diag,
        })
    }

    pub fn wishart(n: usize, m: usize, a2: f64) -> Result<Self> {
        check_n(n)?;
        check_m(m)?;
        check_scale(a2, "a2")?;
        Ok(EnsembleSpec::Wishart { n, m, a2 })
    }

    pub fn sample_covariance(n: usize, m: usize, entries: EntryDistribution) -> Result<Self> {
        check_n(n)?;
        check_m(m)?;
        let a2 = entries.variance();
        Ok(EnsembleSpec::SampleCovariance { n, m, a2, entries })
    }

    pub fn family(&self) -> Family {
        match self {
            EnsembleSpec::Goe { .. } => Family::Goe,
            EnsembleSpec::Wigner { .. } => Family::Wigner,
            EnsembleSpec::Wishart { .. } => Family::Wishart,
            EnsembleSpec::SampleCovariance { .. } => Family::SampleCovariance,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            EnsembleSpec::Goe { n, .. }
            | EnsembleSpec::Wigner { n, .. }
            | EnsembleSpec::Wishart { n, .. }
            | EnsembleSpec::SampleCovariance { n, .. } => n,
        }
    }

    /// The same ensemble at a different matrix size (used for n-grids).
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        match self {
            EnsembleSpec::Goe { w2, .. } => EnsembleSpec::goe(n, *w2),
            EnsembleSpec::Wigner { offdiag, diag, .. } => {
                EnsembleSpec::wigner(n, offdiag.clone(), Some(diag.clone()))
            }
            // Covariance families keep their aspect ratio.
            EnsembleSpec::Wishart { n: n0, m, a2 } => {
                let m_new = (*m as f64 * n as f64 / *n0 as f64).round() as usize;
                EnsembleSpec::wishart(n, m_new, *a2)
            }
            EnsembleSpec::SampleCovariance { n: n0, m, entries, .. } => {
                let m_new = (*m as f64 * n as f64 / *n0 as f64).round() as usize;
                EnsembleSpec::sample_covariance(n, m_new, entries.clone())
            }
        }
    }

    /// Aspect ratio c_n = m/n for covariance families.
    pub fn aspect_ratio(&self) -> Option<f64> {
        match *self {
            EnsembleSpec::Wishart { n, m, .. }
            | EnsembleSpec::SampleCovariance { n, m, .. } => Some(m as f64 / n as f64),
            _ => None,
        }
    }

    /// Scale parameter: w² for Wigner families, a² for covariance families.
    pub fn scale(&self) -> f64 {
        match *self {
            EnsembleSpec::Goe { w2, .. } | EnsembleSpec::Wigner { w2, .. } => w2,
            EnsembleSpec::Wishart { a2, .. } | EnsembleSpec::SampleCovariance { a2, .. } => a2,
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::argument("matrix dimension n must be at least 2"));
    }
    Ok(())
}

fn check_m(m: usize) -> Result<()> {
    if m < 1 {
        return Err(Error::argument(
            "covariance families need the row count m ≥ 1",
        ));
    }
    Ok(())
}

fn check_scale(v: f64, name: &str) -> Result<()> {
    if !(v > 0.0) {
        return Err(Error::argument(format!("{name} must be positive")));
    }
    Ok(())
}

/// A dense real symmetric matrix in row-major storage.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::argument("matrix rows must be square"));
        }
        let mut m = SymmetricMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.data[i * n + j] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    /// Sets both (i, j) and (j, i).
    #[inline]
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Row-major view of the dense storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn trace_of_square(&self) -> f64 {
        crate::quad::kahan_sum(self.data.iter().map(|&v| v * v))
    }

    /// Largest absolute entry, a cheap norm surrogate for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }

    /// Worst symmetry defect max|A_ij − A_ji|.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Draws one matrix from the ensemble using the supplied rng.
pub fn sample_matrix<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<SymmetricMatrix> {
    match spec {
        EnsembleSpec::Goe { n, w2 } => {
            let off = EntryDistribution::gaussian(*w2)?;
            let diag = EntryDistribution::gaussian(2.0 * w2)?;
            Ok(wigner_from_entries(*n, &off, &diag, rng))
        }
        EnsembleSpec::Wigner {
            n, offdiag, diag, ..
        } => Ok(wigner_from_entries(*n, offdiag, diag, rng)),
        EnsembleSpec::Wishart { n, m, a2 } => {
            let entries = EntryDistribution::gaussian(*a2)?;
            Ok(covariance_from_entries(*n, *m, &entries, rng))
        }
        EnsembleSpec::SampleCovariance { n, m, entries, .. } => {
            Ok(covariance_from_entries(*n, *m, entries, rng))
        }
    }
}

/// W entries drawn row-major over the upper triangle, then M = W/√n.
fn wigner_from_entries<R: Rng + ?Sized>(
    n: usize,
    offdiag: &EntryDistribution,
    diag: &EntryDistribution,
    rng: &mut R,
) -> SymmetricMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = SymmetricMatrix::zeros(n);
    for j in 0..n {
        m.set(j, j, diag.sample(rng) * scale);
        for k in (j + 1)..n {
            m.set_sym(j, k, offdiag.sample(rng) * scale);
        }
    }
    m
}

/// X drawn row-major (α, j), then M = n^{-1} XᵀX mirrored from its upper
/// triangle. The Gram product accumulates rank-one updates row by row so the
/// inner loop walks contiguous memory.
fn covariance_from_entries<R: Rng + ?Sized>(
    n: usize,
    m_rows: usize,
    entries: &EntryDistribution,
    rng: &mut R,
) -> SymmetricMatrix {
    let mut row = vec![0.0; n];
    let mut upper = vec![0.0; n * n];
    for _ in 0..m_rows {
        for v in row.iter_mut() {
            *v = entries.sample(rng);
        }
        for j in 0..n {
            let xj = row[j];
            let dst = &mut upper[j * n + j..(j + 1) * n];
            for (d, &xk) in dst.iter_mut().zip(&row[j..]) {
                *d += xj * xk;
            }
        }
    }
    let mut m = SymmetricMatrix::zeros(n);
    let inv_n = 1.0 / n as f64;
    for j in 0..n {
        for k in j..n {
            m.set_sym(j, k, upper[j * n + k] * inv_n);
        }
    }
    m
}

/// Caps every entry at τ√n in absolute value: e ↦ sign(e)·min{|e|, τ√n}.
/// Idempotent; entries already within the cap are unchanged.
pub fn truncate_entries(entries: &mut [f64], n: usize, tau: f64) -> Result<usize> {
    if !(tau > 0.0) {
        return Err(Error::argument("truncation level tau must be positive"));
    }
    let cap = tau * (n as f64).sqrt();
    let mut changed = 0;
    for e in entries.iter_mut() {
        if e.abs() > cap {
            *e = cap.copysign(*e);
            changed += 1;
        }
    }
    Ok(changed)
}
