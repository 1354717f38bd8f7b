//! Gram and Vandermonde matrices, the two Jacobi solvers, Schur complements
//! and checks of the matrix inequalities used by the bounds.
//!
//! The reference path (`gram-dd`) diagonalizes the `M×M` Gram matrix in
//! double-double. The `svd-f64` path orthogonalizes the rows of the `M×N`
//! Vandermonde matrix in binary64 and serves as an independent oracle.

mod gram;
mod jacobi;
pub mod lemmas;
mod matrix;
mod schur;
mod svd;

use std::fmt;
use std::str::FromStr;

use crate::extprec::ExtReal;
use crate::nodes::NodeSet;

pub use gram::{build_gram, GramMatrix, VandermondeMatrix, MAX_COLS, MAX_ROWS};
pub use jacobi::{eig_sym_jacobi, MAX_SWEEPS};
pub use lemmas::{check_appendix_lemmas, LemmaOutcome, LemmaReport, LemmaSample};
pub use matrix::DdMatrix;
pub use schur::{schur_decompose, PartitionedGram, SchurFactors};
pub use svd::svd_one_sided_jacobi;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (relative off-diagonal norm {off_norm:e})")]
    NotConverged { sweeps: usize, off_norm: f64 },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("smallest eigenvalue {0:e} is not positive")]
    NotPositiveDefinite(f64),
    #[error("smallest eigenvalue {lmin:e} is below the resolution {floor:e} of the double-double solver")]
    BelowResolution { lmin: f64, floor: f64 },
    #[error("Vandermonde matrix with M = {m}, N = {big_n} exceeds the size guard (M <= 512, N <= 65536)")]
    SizeGuard { m: usize, big_n: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    GramDd,
    SvdF64,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::GramDd => "gram-dd",
            Mode::SvdF64 => "svd-f64",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gram-dd" => Ok(Mode::GramDd),
            "svd-f64" => Ok(Mode::SvdF64),
            other => Err(format!(
                "unknown mode {other:?} (expected gram-dd or svd-f64)"
            )),
        }
    }
}

/// Extreme singular values of `A` and the derived norms.
///
/// `norm_k = sigma_max²`, `norm_k_inv = sigma_min⁻²`, `cond = sigma_max/sigma_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub sigma_min: ExtReal,
    pub sigma_max: ExtReal,
    pub cond: ExtReal,
    pub norm_k: ExtReal,
    pub norm_k_inv: ExtReal,
    pub mode: Mode,
}

impl SpectralSummary {
    fn from_eigen_extremes(
        lmin: ExtReal,
        lmax: ExtReal,
        mode: Mode,
    ) -> Result<Self, SpectralError> {
        if !(lmin > ExtReal::ZERO) {
            return Err(SpectralError::NotPositiveDefinite(lmin.to_f64()));
        }
        let sigma_min = lmin.sqrt();
        let sigma_max = lmax.sqrt();
        Ok(SpectralSummary {
            sigma_min,
            sigma_max,
            cond: sigma_max / sigma_min,
            norm_k: lmax,
            norm_k_inv: lmin.recip(),
            mode,
        })
    }

    /// `‖A†‖ = 1/σ_min`.
    pub fn pinv_norm(&self) -> ExtReal {
        self.sigma_min.recip()
    }
}

/// Eigenvalues of the Gram matrix, ascending.
pub fn gram_eigenvalues(ns: &NodeSet) -> Result<Vec<ExtReal>, SpectralError> {
    eig_sym_jacobi(build_gram(ns).matrix())
}

/// Eigenvalues below `GRAM_RESOLUTION·M·λ_max` are indistinguishable from
/// rounding noise of the double-double Jacobi solver.
pub const GRAM_RESOLUTION: f64 = 1e-28;

pub fn spectral_summary(ns: &NodeSet, mode: Mode) -> Result<SpectralSummary, SpectralError> {
    match mode {
        Mode::GramDd => {
            let eig = gram_eigenvalues(ns)?;
            let floor = eig[eig.len() - 1] * (GRAM_RESOLUTION * ns.len() as f64);
            if eig[0] <= floor {
                return Err(SpectralError::BelowResolution {
                    lmin: eig[0].to_f64(),
                    floor: floor.to_f64(),
                });
            }
            SpectralSummary::from_eigen_extremes(eig[0], eig[eig.len() - 1], mode)
        }
        Mode::SvdF64 => {
            let sigma = svd_one_sided_jacobi(&VandermondeMatrix::new(ns)?)?;
            let smax = ExtReal::from_f64(sigma[0]);
            let smin = ExtReal::from_f64(sigma[sigma.len() - 1]);
            SpectralSummary::from_eigen_extremes(smin.sqr(), smax.sqr(), mode).map(|mut s| {
                s.sigma_min = smin;
                s.sigma_max = smax;
                s.cond = smax / smin;
                s
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{dirichlet, Bandwidth};

    #[test]
    fn roots_of_unity_are_perfectly_conditioned() {
        let bw = Bandwidth::new(3);
        let t: Vec<f64> = (0..7).map(|k| k as f64 / 7.0).collect();
        let ns = NodeSet::from_f64(bw, &t).unwrap();
        for mode in [Mode::GramDd, Mode::SvdF64] {
            let s = spectral_summary(&ns, mode).unwrap();
            assert!(
                (s.cond.to_f64() - 1.0).abs() < 1e-13,
                "{mode}: {:?}",
                s.cond
            );
        }
    }

    #[test]
    fn two_nodes_closed_form() {
        let bw = Bandwidth::new(50);
        let gap = ExtReal::from_f64(0.5) / 101.0;
        let ns = NodeSet::new(bw, vec![ExtReal::ZERO, gap]).unwrap();
        let s = spectral_summary(&ns, Mode::GramDd).unwrap();
        let d = dirichlet(bw, gap);
        let n = ExtReal::from_f64(101.0);
        let want = (n + d) / (n - d);
        assert!(((s.cond.sqr() - want) / want).abs().to_f64() < 1e-28);
        assert!(
            ((s.norm_k * s.norm_k_inv - s.cond.sqr()) / want)
                .abs()
                .to_f64()
                < 1e-28
        );
    }

    #[test]
    fn unresolvable_gap_is_reported() {
        let bw = Bandwidth::new(1);
        let ns = NodeSet::new(bw, vec![ExtReal::ZERO, ExtReal::from_f64(1e-30)]).unwrap();
        assert!(matches!(
            spectral_summary(&ns, Mode::GramDd),
            Err(SpectralError::BelowResolution { .. })
        ));
        let s = spectral_summary(&ns, Mode::SvdF64).unwrap();
        assert!(s.sigma_min.to_f64() < 1e-25);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("gram-dd".parse::<Mode>().unwrap(), Mode::GramDd);
        assert_eq!("svd-f64".parse::<Mode>().unwrap(), Mode::SvdF64);
        assert!("svd".parse::<Mode>().is_err());
    }
}
