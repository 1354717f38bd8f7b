//! The Gram matrix against an explicit `A·A*`, the Jacobi eigensolver on
//! matrices with a prescribed spectrum, and structural identities of the
//! spectrum: trace, determinant, interlacing, agreement of the two solvers.

use num_complex::Complex64;
use vandercond::kernel::Bandwidth;
use vandercond::nodes::rng::Stream;
use vandercond::nodes::{
    gen_one_pair, gen_pairwise, gen_well_separated, interleaved_pairing, NodeSet,
};
use vandercond::spectral::{
    build_gram, eig_sym_jacobi, gram_eigenvalues, schur_decompose, spectral_summary, DdMatrix,
    Mode, PartitionedGram, VandermondeMatrix,
};
use vandercond::ExtReal;

fn random_nodes(rng: &mut Stream, m: usize, n: u32) -> NodeSet {
    let t: Vec<f64> = (0..m).map(|_| rng.uniform()).collect();
    NodeSet::from_f64(Bandwidth::new(n), &t).unwrap()
}

#[test]
fn gram_equals_explicit_product() {
    let mut rng = Stream::new(11);
    for (m, n) in [(1, 0), (3, 2), (6, 10), (12, 100)] {
        let ns = random_nodes(&mut rng, m, n);
        let a = VandermondeMatrix::new(&ns).unwrap();
        let k = build_gram(&ns);
        let big_n = ns.bandwidth().n_f64();
        assert_eq!(a.rows().len(), m);
        for i in 0..m {
            assert_eq!(a.rows()[i].len(), big_n as usize);
            for j in 0..m {
                let aa: Complex64 = a.rows()[i]
                    .iter()
                    .zip(&a.rows()[j])
                    .map(|(x, y)| x * y.conj())
                    .sum();
                let kij = k.matrix()[(i, j)].to_f64();
                assert!(
                    (aa.re - kij).abs() < 1e-12 * big_n,
                    "({i},{j}): {aa} vs {kij}"
                );
                assert!(aa.im.abs() < 1e-12 * big_n);
            }
        }
    }
}

/// `I − 2vvᵀ/(vᵀv)`.
fn householder(v: &[f64]) -> DdMatrix {
    let n = v.len();
    let vv: ExtReal = v.iter().map(|x| ExtReal::from_f64(x * x)).sum();
    DdMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { ExtReal::ONE } else { ExtReal::ZERO };
        d - ExtReal::from_f64(2.0 * v[i] * v[j]) / vv
    })
}

fn with_spectrum(lambda: &[f64], rng: &mut Stream) -> DdMatrix {
    let n = lambda.len();
    let mut q = DdMatrix::identity(n);
    for _ in 0..3 {
        let v: Vec<f64> = (0..n)
            .map(|_| (rng.uniform() * 16.0).floor() - 8.0 + 0.5)
            .collect();
        q = q.matmul(&householder(&v));
    }
    let d = DdMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ExtReal::from_f64(lambda[i])
        } else {
            ExtReal::ZERO
        }
    });
    let k = q.matmul(&d).matmul(&q.transpose());
    // exact symmetry for the solver's precondition
    DdMatrix::from_fn(n, n, |i, j| if i <= j { k[(i, j)] } else { k[(j, i)] })
}

#[test]
fn jacobi_recovers_synthetic_spectrum() {
    let mut rng = Stream::new(0xe1);
    let spectra: [[f64; 8]; 3] = [
        [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0],
        [1e-6, 1e-3, 0.5, 1.0, 1.0, 2.0, 1e3, 1e6],
        [0.25, 0.25, 0.25, 0.75, 1.5, 1.5, 3.0, 3.0],
    ];
    for lambda in spectra {
        let k = with_spectrum(&lambda, &mut rng);
        let got = eig_sym_jacobi(&k).unwrap();
        let scale = lambda.iter().fold(0.0f64, |a, &b| a.max(b));
        for (g, w) in got.iter().zip(lambda) {
            let err = (*g - w).abs().to_f64();
            assert!(err <= 1e-25 * scale, "{g:?} vs {w}: {err:e}");
        }
    }
}

#[test]
fn trace_is_conserved() {
    let mut rng = Stream::new(0x7a);
    for seed in 0..20 {
        let ns = gen_one_pair(3 + (rng.uniform() * 10.0) as usize, seed);
        let eig = gram_eigenvalues(&ns).unwrap();
        let trace: ExtReal = eig.iter().copied().sum();
        let want = ns.bandwidth().n_f64() * ns.len() as f64;
        assert!(
            ((trace - want) / want).abs().to_f64() < 1e-28,
            "{trace:?} vs {want}"
        );
    }
}

#[test]
fn determinant_identities() {
    for seed in 0..10 {
        let ns = gen_pairwise(6, 2.0, seed);
        let k = build_gram(&ns);
        let eig = gram_eigenvalues(&ns).unwrap();
        let prod = eig.iter().fold(ExtReal::ONE, |a, &b| a * b);
        let det = k.matrix().determinant();
        assert!(
            ((det - prod) / prod).abs().to_f64() < 1e-12,
            "{det:?} vs {prod:?}"
        );

        let p = PartitionedGram::pairwise(&ns, &interleaved_pairing(6));
        let f = schur_decompose(&p).unwrap();
        let split = p.k1.determinant() * f.complement.determinant();
        assert!(
            ((split - det) / det).abs().to_f64() < 1e-12,
            "{split:?} vs {det:?}"
        );
    }
}

#[test]
fn nested_configurations_interlace() {
    let mut rng = Stream::new(0x1e);
    for seed in 0..20 {
        let ns = gen_well_separated(8, seed);
        let parent = gram_eigenvalues(&ns).unwrap();
        let mut keep: Vec<usize> = (0..8).filter(|_| rng.uniform() < 0.6).collect();
        if keep.is_empty() {
            keep.push(0);
        }
        let sub = gram_eigenvalues(&ns.subset(&keep).unwrap()).unwrap();
        let k = 8 - keep.len();
        let slack = 1e-25 * ns.bandwidth().n_f64();
        for (i, mu) in sub.iter().enumerate() {
            assert!(parent[i] - slack <= *mu && *mu <= parent[i + k] + slack);
        }
    }
}

#[test]
fn solvers_agree_on_moderate_conditioning() {
    let mut checked = 0;
    for seed in 0..20 {
        let ns = gen_pairwise(8, 1.5, 1000 + seed);
        let a = spectral_summary(&ns, Mode::GramDd).unwrap();
        if a.cond.to_f64() > 1e8 {
            continue;
        }
        let b = spectral_summary(&ns, Mode::SvdF64).unwrap();
        for (x, y) in [(a.sigma_min, b.sigma_min), (a.sigma_max, b.sigma_max)] {
            assert!(((x - y) / x).abs().to_f64() < 1e-10, "{x:?} vs {y:?}");
        }
        checked += 1;
    }
    assert!(checked >= 3, "{checked}");
}

#[test]
fn size_guard_rejects_huge_vandermonde() {
    let ns = NodeSet::from_f64(Bandwidth::from_big_n((1 << 16) + 1).unwrap(), &[0.0, 0.5]).unwrap();
    assert!(VandermondeMatrix::new(&ns).is_err());
    assert!(spectral_summary(&ns, Mode::GramDd).is_ok());
}
