//! One-sided (Hestenes) Jacobi SVD of the Vandermonde matrix in binary64.
//!
//! Pairs of rows are rotated until all are mutually orthogonal to working
//! precision; the singular values are then the row norms.

use num_complex::Complex64;

use super::{SpectralError, VandermondeMatrix};

const MAX_SWEEPS: usize = 60;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Singular values of `A`, descending.
pub fn svd_one_sided_jacobi(a: &VandermondeMatrix) -> Result<Vec<f64>, SpectralError> {
    let mut rows: Vec<Vec<Complex64>> = a.rows().to_vec();
    let m = rows.len();
    let tol = f64::EPSILON * (m.max(2) as f64);
    let mut norms: Vec<f64> = rows.iter().map(|r| norm_sq(r)).collect();

    let mut sweep = 0;
    loop {
        let mut rotated = false;
        for p in 0..m.saturating_sub(1) {
            for q in p + 1..m {
                let alpha = norms[p];
                let beta = norms[q];
                let gamma = dot(&rows[p], &rows[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                let (lo, hi) = rows.split_at_mut(q);
                let (rp, rq) = (&mut lo[p], &mut hi[0]);
                let sp = phase * s;
                let sq = phase.conj() * s;
                for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - sp * yq;
                    *y = sq * xp + yq * c;
                }
                norms[p] = norm_sq(rp);
                norms[q] = norm_sq(rq);
            }
        }
        sweep += 1;
        if !rotated {
            break;
        }
        if sweep == MAX_SWEEPS {
            return Err(SpectralError::NotConverged {
                sweeps: sweep,
                off_norm: f64::NAN,
            });
        }
    }
    let mut sigma: Vec<f64> = norms.iter().map(|v| v.sqrt()).collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok(sigma)
}
