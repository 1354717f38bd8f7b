//! Cyclic two-sided Jacobi eigenvalue iteration in double-double.
//!
//! Row-cyclic ordering. A rotation is applied only when
//! `|a_pq| > 1e-60 · sqrt(|a_pp a_qq|)`. The iteration stops once the
//! off-diagonal Frobenius mass falls below `1e-60 · ‖K‖_F`, or a full sweep
//! applies no rotation.

use super::{DdMatrix, SpectralError};
use crate::extprec::ExtReal;

pub const MAX_SWEEPS: usize = 60;
const ROTATION_THRESHOLD: f64 = 1e-60;
const OFF_DIAGONAL_TOLERANCE: f64 = 1e-60;

/// Off-diagonal Frobenius norm relative to `fro`.
fn relative_off_norm(a: &[ExtReal], m: usize, fro: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            let v = a[i * m + j].hi() / fro;
            acc += 2.0 * v * v;
        }
    }
    acc.sqrt()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn eig_sym_jacobi(k: &DdMatrix) -> Result<Vec<ExtReal>, SpectralError> {
    if !k.is_square() {
        return Err(SpectralError::NotSquare(k.rows(), k.cols()));
    }
    if !k.is_symmetric() {
        return Err(SpectralError::NotSymmetric);
    }
    let m = k.rows();
    let mut work = k.clone();
    let a = work.as_mut_slice();
    let fro = k.frobenius_norm().to_f64();

    let mut converged = fro == 0.0 || m < 2;
    let mut sweeps = 0;
    while !converged {
        if relative_off_norm(a, m, fro) < OFF_DIAGONAL_TOLERANCE {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NotConverged {
                sweeps,
                off_norm: relative_off_norm(a, m, fro),
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..m - 1 {
            for q in p + 1..m {
                if rotate(a, m, p, q) {
                    rotated = true;
                }
            }
        }
        converged = !rotated;
    }

    let mut eig: Vec<ExtReal> = (0..m).map(|i| a[i * m + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}

/// Annihilates `a[p][q]`; returns whether a rotation was applied.
#[inline]
fn rotate(a: &mut [ExtReal], m: usize, p: usize, q: usize) -> bool {
    let apq = a[p * m + q];
    if apq.is_zero() {
        return false;
    }
    let app = a[p * m + p];
    let aqq = a[q * m + q];
    let scale = (app.hi() * aqq.hi()).abs().sqrt();
    if apq.hi().abs() <= ROTATION_THRESHOLD * scale {
        return false;
    }

    let theta = (aqq - app) / (apq * 2.0);
    let t = if theta.hi().abs() > 1e150 {
        (theta * 2.0).recip()
    } else {
        let r = (theta.sqr() + 1.0).sqrt() + theta.abs();
        if theta.is_sign_negative() {
            -r.recip()
        } else {
            r.recip()
        }
    };
    let c = (t.sqr() + 1.0).sqrt().recip();
    let s = t * c;
    let tapq = t * apq;

    a[p * m + p] = app - tapq;
    a[q * m + q] = aqq + tapq;
    a[p * m + q] = ExtReal::ZERO;
    a[q * m + p] = ExtReal::ZERO;

    for r in 0..m {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * m + p];
        let arq = a[r * m + q];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[r * m + p] = new_rp;
        a[p * m + r] = new_rp;
        a[r * m + q] = new_rq;
        a[q * m + r] = new_rq;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let k = DdMatrix::from_f64(3, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]);
        let e: Vec<f64> = eig_sym_jacobi(&k)
            .unwrap()
            .iter()
            .map(|v| v.to_f64())
            .collect();
        assert_eq!(e, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (n, d) = (101.0, 100.999);
        let k = DdMatrix::from_f64(2, 2, &[n, d, d, n]);
        let e = eig_sym_jacobi(&k).unwrap();
        assert!((e[0] - (ExtReal::from_f64(n) - d)).abs().to_f64() < 1e-30);
        assert!((e[1] - (ExtReal::from_f64(n) + d)).abs().to_f64() < 1e-28);
    }

    #[test]
    fn rejects_asymmetric() {
        let k = DdMatrix::from_f64(2, 2, &[1.0, 2.0, 3.0, 1.0]);
        assert!(matches!(
            eig_sym_jacobi(&k),
            Err(SpectralError::NotSymmetric)
        ));
    }

    #[test]
    fn trace_is_preserved() {
        let m = 7;
        let k = DdMatrix::from_fn(m, m, |i, j| {
            ExtReal::from_f64(1.0 / (1.0 + i as f64 + j as f64)) + if i == j { 2.0 } else { 0.0 }
        });
        let e = eig_sym_jacobi(&k).unwrap();
        let trace: ExtReal = (0..m).map(|i| k[(i, i)]).sum();
        let sum: ExtReal = e.iter().copied().sum();
        assert!(((trace - sum) / trace).abs().to_f64() < 1e-30);
    }
}
