//! Randomized checks of the matrix inequalities behind the bounds:
//! entrywise domination of spectral norms, the Neumann-series inverse bound,
//! the Schur complement factorization, Cauchy interlacing and the two
//! block-Gerschgorin norm estimates.
//!
//! Inequalities that hold with equality for some inputs are compared with a
//! relative slack of [`SLACK`].

use super::{
    build_gram, eig_sym_jacobi, schur_decompose, DdMatrix, PartitionedGram, SpectralError,
};
use crate::extprec::ExtReal;
use crate::nodes::rng::{split_seed, Stream};
use crate::nodes::{gen_one_pair, gen_pairwise, interleaved_pairing};

/// Relative slack for inequalities that may be attained.
pub const SLACK: f64 = 1e-20;
/// Required Schur reconstruction accuracy, relative to `‖K‖_F`.
pub const SCHUR_TOLERANCE: f64 = 1e-20;

/// `XᵀX`, symmetric bit for bit.
fn gram_of(x: &DdMatrix) -> DdMatrix {
    let n = x.cols();
    let mut g = DdMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: ExtReal = (0..x.rows()).map(|k| x[(k, i)] * x[(k, j)]).sum();
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

fn symmetrize(a: &DdMatrix) -> DdMatrix {
    DdMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        let (p, q) = (i.min(j), i.max(j));
        a[(p, q)]
    })
}

/// Spectral norm via the largest eigenvalue of `XᵀX`.
pub fn spectral_norm(x: &DdMatrix) -> Result<ExtReal, SpectralError> {
    if x.rows() == 0 || x.cols() == 0 {
        return Ok(ExtReal::ZERO);
    }
    let eig = eig_sym_jacobi(&gram_of(x))?;
    Ok(eig[eig.len() - 1].max(ExtReal::ZERO).sqrt())
}

fn le_with_slack(a: ExtReal, b: ExtReal) -> bool {
    a <= b + b.abs() * SLACK
}

/// `|M| <= M̃` entrywise implies `‖M‖ <= ‖M̃‖`.
pub fn check_abs_domination(m: &DdMatrix, dominant: &DdMatrix) -> Result<bool, SpectralError> {
    assert!(m
        .as_slice()
        .iter()
        .zip(dominant.as_slice())
        .all(|(a, b)| a.abs() <= *b));
    Ok(le_with_slack(spectral_norm(m)?, spectral_norm(dominant)?))
}

/// For symmetric positive definite `M` and `η > ‖M‖`:
/// `‖M⁻¹‖ <= 1/(η − ‖ηI − M‖)`.
///
/// Compared as `η − ‖ηI − M‖ <= λ_min(M)` with slack `SLACK·η`: both sides
/// carry absolute errors of order `η`, and equality holds for every input.
pub fn check_neumann(m: &DdMatrix, eta: ExtReal) -> Result<bool, SpectralError> {
    let eig = eig_sym_jacobi(m)?;
    let shifted = symmetrize(&DdMatrix::identity(m.rows()).scale(eta).sub(m));
    let se = eig_sym_jacobi(&shifted)?;
    let shifted_norm = se[0].abs().max(se[se.len() - 1].abs());
    Ok(eta - shifted_norm <= eig[0] + eta.abs() * SLACK)
}

/// Eigenvalues of the principal submatrix on `keep` interlace those of `m`.
pub fn check_interlacing(m: &DdMatrix, keep: &[usize]) -> Result<bool, SpectralError> {
    let n = m.rows();
    let k = keep.len();
    let parent = eig_sym_jacobi(m)?;
    let child = eig_sym_jacobi(&m.select(keep, keep))?;
    let scale = parent
        .iter()
        .map(|v| v.abs())
        .fold(ExtReal::ZERO, ExtReal::max)
        * SLACK;
    Ok((0..k).all(|i| parent[i] <= child[i] + scale && child[i] <= parent[i + n - k] + scale))
}

/// `‖[[0, Mᵀ], [M, 0]]‖ <= ‖M‖` and `‖[[I, 0], [M, I]]‖² <= 1 + ‖M‖ + ‖M‖²`.
pub fn check_block_gerschgorin(m: &DdMatrix) -> Result<bool, SpectralError> {
    let (r, c) = (m.rows(), m.cols());
    let norm = spectral_norm(m)?;
    let off = DdMatrix::from_blocks(
        &DdMatrix::zeros(c, c),
        &m.transpose(),
        m,
        &DdMatrix::zeros(r, r),
    );
    let first = le_with_slack(spectral_norm(&off)?, norm);
    let tri = if r == c {
        DdMatrix::from_blocks(
            &DdMatrix::identity(c),
            &DdMatrix::zeros(c, r),
            m,
            &DdMatrix::identity(r),
        )
    } else {
        // the triangular estimate needs square blocks
        return Ok(first);
    };
    let tri_norm = spectral_norm(&tri)?;
    let second = le_with_slack(tri_norm.sqr(), norm.sqr() + norm + 1.0);
    Ok(first && second)
}

/// `‖L⁻¹ D U⁻¹ − K‖_max / ‖K‖_F`.
pub fn schur_residual(p: &PartitionedGram) -> Result<f64, SpectralError> {
    let k = p.assemble();
    let f = schur_decompose(p)?;
    Ok((f.reconstruct().sub(&k).max_abs() / k.frobenius_norm()).to_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaSample {
    pub seed: u64,
    /// Random matrices per inequality.
    pub matrices: usize,
    /// Partitioned Gram matrices for the Schur reconstruction.
    pub partitions: usize,
}

impl Default for LemmaSample {
    fn default() -> Self {
        LemmaSample {
            seed: 0x5EED,
            matrices: 1000,
            partitions: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    /// Solver failures, counted separately from violations.
    pub errors: usize,
    /// Largest Schur residual seen, when applicable.
    pub worst_residual: Option<f64>,
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0 && self.cases > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub outcomes: Vec<LemmaOutcome>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LemmaOutcome::passed)
    }
}

fn random_matrix(rng: &mut Stream, rows: usize, cols: usize) -> DdMatrix {
    DdMatrix::from_fn(rows, cols, |_, _| {
        ExtReal::from_f64(2.0 * rng.uniform() - 1.0)
    })
}

fn random_dim(rng: &mut Stream, max: usize) -> usize {
    1 + (rng.uniform() * max as f64) as usize
}

fn random_spd(rng: &mut Stream, n: usize) -> DdMatrix {
    let x = random_matrix(rng, n + 2, n);
    let mut g = gram_of(&x);
    let shift = ExtReal::from_f64(0.01 + rng.uniform());
    for i in 0..n {
        g[(i, i)] += shift;
    }
    g
}

fn tally(
    name: &'static str,
    cases: usize,
    seed: u64,
    mut case: impl FnMut(&mut Stream, usize) -> Result<bool, SpectralError>,
) -> LemmaOutcome {
    let mut out = LemmaOutcome {
        name,
        cases,
        violations: 0,
        errors: 0,
        worst_residual: None,
    };
    for i in 0..cases {
        let mut rng = Stream::new(split_seed(seed, i as u64));
        match case(&mut rng, i) {
            Ok(true) => {}
            Ok(false) => out.violations += 1,
            Err(_) => out.errors += 1,
        }
    }
    out
}

/// Runs every randomized matrix-inequality check.
///
/// Matrices are dense with entries uniform in `[-1, 1]` and dimensions up to
/// 8. Every tenth Neumann and interlacing case is drawn from the Gram matrix
/// of a generated node configuration instead.
pub fn check_appendix_lemmas(sample: &LemmaSample) -> LemmaReport {
    let n = sample.matrices;
    let mut outcomes = Vec::new();

    outcomes.push(tally(
        "abs-domination",
        n,
        split_seed(sample.seed, 1),
        |rng, _| {
            let (r, c) = (random_dim(rng, 8), random_dim(rng, 8));
            let m = random_matrix(rng, r, c);
            let bump = rng.uniform() < 0.5;
            let dom = DdMatrix::from_fn(r, c, |i, j| {
                let base = m[(i, j)].abs();
                if bump {
                    base + rng.uniform()
                } else {
                    base
                }
            });
            check_abs_domination(&m, &dom)
        },
    ));

    outcomes.push(tally("neumann", n, split_seed(sample.seed, 2), |rng, i| {
        if i % 10 == 0 {
            // Schur complement of a pairwise Gram matrix with η = 2N
            let m = 4 + 2 * (i / 10 % 3);
            let ns = gen_pairwise(m, 1.0 + rng.uniform(), rng.uniform().to_bits());
            let p = PartitionedGram::pairwise(&ns, &interleaved_pairing(m));
            let s = symmetrize(&schur_decompose(&p)?.complement);
            return check_neumann(&s, ExtReal::from_f64(2.0 * ns.bandwidth().n_f64()));
        }
        let dim = random_dim(rng, 8);
        let m = random_spd(rng, dim);
        let top = eig_sym_jacobi(&m)?[dim - 1];
        let eta = top * (1.0 + 2.0 * rng.uniform()) + 1e-3;
        check_neumann(&m, eta)
    }));

    outcomes.push(tally(
        "interlacing",
        n,
        split_seed(sample.seed, 3),
        |rng, i| {
            if i % 10 == 0 {
                // colliding 2×2 block of a one-pair Gram matrix
                let ns = gen_one_pair(3 + i / 10 % 8, rng.uniform().to_bits());
                return check_interlacing(build_gram(&ns).matrix(), &[0, 1]);
            }
            let dim = random_dim(rng, 8);
            let x = random_matrix(rng, dim, dim);
            let m = symmetrize(&x.add(&x.transpose()));
            let keep: Vec<usize> = (0..dim).filter(|_| rng.uniform() < 0.6).collect();
            if keep.is_empty() {
                return check_interlacing(&m, &[0]);
            }
            check_interlacing(&m, &keep)
        },
    ));

    outcomes.push(tally(
        "block-gerschgorin",
        n,
        split_seed(sample.seed, 4),
        |rng, i| {
            let dim = random_dim(rng, 6);
            let (r, c) = if i % 4 == 0 {
                (random_dim(rng, 6), dim)
            } else {
                (dim, dim)
            };
            let m = if i == 0 {
                DdMatrix::zeros(r, c)
            } else {
                random_matrix(rng, r, c).scale(ExtReal::from_f64(3.0 * rng.uniform()))
            };
            check_block_gerschgorin(&m)
        },
    ));

    let mut worst = 0.0f64;
    let mut schur = tally(
        "schur-decomposition",
        sample.partitions,
        split_seed(sample.seed, 5),
        |rng, i| {
            let p = if i % 2 == 0 {
                let ns = gen_one_pair(3 + i % 10, rng.uniform().to_bits());
                PartitionedGram::one_pair(&ns, (0, 1))
            } else {
                let m = 4 + 2 * (i % 4);
                let ns = gen_pairwise(m, 1.0 + rng.uniform(), rng.uniform().to_bits());
                PartitionedGram::pairwise(&ns, &interleaved_pairing(m))
            };
            let r = schur_residual(&p)?;
            worst = worst.max(r);
            Ok(r <= SCHUR_TOLERANCE)
        },
    );
    schur.worst_residual = Some(worst);
    outcomes.push(schur);

    LemmaReport { outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_block_estimates() {
        let z = DdMatrix::zeros(3, 3);
        assert!(check_block_gerschgorin(&z).unwrap());
        let tri = DdMatrix::from_blocks(&DdMatrix::identity(3), &z, &z, &DdMatrix::identity(3));
        assert_eq!(spectral_norm(&tri).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        // single nonzero row (3, 4)
        let m = DdMatrix::from_f64(2, 2, &[0.0, 0.0, 3.0, 4.0]);
        assert!((spectral_norm(&m).unwrap().to_f64() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn small_run_passes() {
        let report = check_appendix_lemmas(&LemmaSample {
            seed: 1,
            matrices: 40,
            partitions: 6,
        });
        for o in &report.outcomes {
            assert!(o.passed(), "{o:?}");
        }
    }
}
