//! Dirichlet kernel `D_n(t) = Σ_{|k|<=n} e^{2πikt} = sin(Nπt)/sin(πt)` and
//! its first two derivatives, in double-double.
//!
//! `D_n` is even and 1-periodic for odd `N`, so every evaluation first reduces
//! `t` exactly to `[-1/2, 1/2]`. The value at integers is `N`; that branch is
//! taken only when the reduced argument is exactly zero.

use std::f64::consts::PI;

use crate::extprec::ExtReal;

/// Polynomial degree `n` and the number of frequencies `N = 2n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bandwidth {
    n: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("N = {0} must be odd")]
    EvenN(u64),
    #[error("Taylor envelope needs |t| <= 1/N, got t = {t:e} with N = {big_n}")]
    TaylorOutOfRange { t: f64, big_n: u64 },
    #[error("magnitude envelopes need 0 < |t| <= 1/2, got t = {0:e}")]
    MagnitudeOutOfRange(f64),
}

impl Bandwidth {
    pub const fn new(n: u32) -> Self {
        Bandwidth { n }
    }

    /// From the number of frequencies `N`, which must be odd.
    pub fn from_big_n(big_n: u64) -> Result<Self, KernelError> {
        if big_n.is_multiple_of(2) || big_n / 2 > u32::MAX as u64 {
            return Err(KernelError::EvenN(big_n));
        }
        Ok(Bandwidth {
            n: (big_n / 2) as u32,
        })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    #[allow(non_snake_case)]
    pub fn N(self) -> u64 {
        2 * self.n as u64 + 1
    }

    pub fn n_f64(self) -> f64 {
        self.N() as f64
    }
}

/// `D_n(t)`.
pub fn dirichlet(bw: Bandwidth, t: ExtReal) -> ExtReal {
    let r = t.frac_centered();
    let big_n = bw.n_f64();
    if r.is_zero() {
        return ExtReal::from_f64(big_n);
    }
    (r * big_n).sin_pi() / r.sin_pi()
}

/// Terms of the `sinc` series; the last one is below `1e-33` for `|x| <= 1`.
const SINC_TERMS: usize = 16;

/// `(sinc x, sinc' x, sinc'' x)` at `x = πy`, with `sinc x = sin(x)/x`.
///
/// Uses the Taylor series for `|x| <= 1`, where the closed forms of the
/// derivatives cancel catastrophically.
fn sinc_derivs(y: ExtReal) -> [ExtReal; 3] {
    let x = ExtReal::PI * y;
    if x.abs() <= ExtReal::ONE {
        let x2 = x * x;
        // inv_fact = 1/(2j+1)!, pow = x^(2j-2)
        let mut inv_fact = ExtReal::ONE;
        let mut pow = ExtReal::ONE;
        let mut f = [ExtReal::ONE, ExtReal::ZERO, ExtReal::ZERO];
        for j in 1..=SINC_TERMS {
            let k = (2 * j) as f64;
            inv_fact /= k * (k + 1.0);
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            let c = inv_fact * sign;
            f[2] += c * pow * (k * (k - 1.0));
            f[1] += c * pow * x * k;
            pow *= x2;
            f[0] += c * pow;
        }
        f
    } else {
        let (s, c) = y.sincos_pi();
        let x2 = x * x;
        [
            s / x,
            (x * c - s) / x2,
            ((ExtReal::from_f64(2.0) - x2) * s - x * c * 2.0) / (x2 * x),
        ]
    }
}

/// `u = sinc(πNr)`, `v = sinc(πr)` and their first two derivatives in `r`,
/// so that `D_n(r) = N·u/v`.
fn quotient_parts(bw: Bandwidth, r: ExtReal) -> ([ExtReal; 3], [ExtReal; 3]) {
    let big_n = bw.n_f64();
    let pn = ExtReal::PI * big_n;
    let u = sinc_derivs(r * big_n);
    let v = sinc_derivs(r);
    (
        [u[0], u[1] * pn, u[2] * pn * pn],
        [v[0], v[1] * ExtReal::PI, v[2] * ExtReal::PI * ExtReal::PI],
    )
}

/// `D_n'(t)`, zero at integers.
pub fn dirichlet_d1(bw: Bandwidth, t: ExtReal) -> ExtReal {
    let r = t.frac_centered();
    if r.is_zero() {
        return ExtReal::ZERO;
    }
    let (u, v) = quotient_parts(bw, r);
    (u[1] * v[0] - u[0] * v[1]) * bw.n_f64() / (v[0] * v[0])
}

/// `D_n''(t)`; at integers the limit `−N(N²−1)π²/3`.
pub fn dirichlet_d2(bw: Bandwidth, t: ExtReal) -> ExtReal {
    let r = t.frac_centered();
    let (u, v) = quotient_parts(bw, r);
    let w = u[1] * v[0] - u[0] * v[1];
    let v2 = v[0] * v[0];
    ((u[2] * v[0] - u[0] * v[2]) / v2 - v[1] * w * 2.0 / (v2 * v[0])) * bw.n_f64()
}

/// Quadratic sandwich `N − (π²/6)N³t² <= D_n(t) <= N − N³t²` for `|t| <= 1/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorEnvelope {
    pub lower: f64,
    pub upper: f64,
}

/// Magnitude bounds on `|D_n|`, `|D_n'|`, `|D_n''|` for `0 < |t| <= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnitudeEnvelope {
    pub abs_bound: f64,
    pub d1_bound: f64,
    pub d2_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelEnvelopes {
    pub taylor: Result<TaylorEnvelope, KernelError>,
    pub magnitude: Result<MagnitudeEnvelope, KernelError>,
}

pub fn taylor_envelope(bw: Bandwidth, t: f64) -> Result<TaylorEnvelope, KernelError> {
    let big_n = bw.n_f64();
    let a = t.abs();
    if !(a * big_n <= 1.0) {
        return Err(KernelError::TaylorOutOfRange { t, big_n: bw.N() });
    }
    let n3t2 = big_n * big_n * big_n * t * t;
    Ok(TaylorEnvelope {
        lower: big_n - PI * PI / 6.0 * n3t2,
        upper: big_n - n3t2,
    })
}

pub fn magnitude_envelope(bw: Bandwidth, t: f64) -> Result<MagnitudeEnvelope, KernelError> {
    let a = t.abs();
    if !(a > 0.0 && a <= 0.5) {
        return Err(KernelError::MagnitudeOutOfRange(t));
    }
    let n = bw.n_f64();
    let nt = n * a;
    Ok(MagnitudeEnvelope {
        abs_bound: 1.0 / (2.0 * a),
        d1_bound: n * n * (PI / (2.0 * nt) + 1.0 / (2.0 * nt * nt)),
        d2_bound: n * n * n * (PI * PI / (2.0 * nt) + PI / (nt * nt) + 1.0 / (nt * nt * nt)),
    })
}

pub fn kernel_envelopes(bw: Bandwidth, t: f64) -> KernelEnvelopes {
    KernelEnvelopes {
        taylor: taylor_envelope(bw, t),
        magnitude: magnitude_envelope(bw, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: f64) -> ExtReal {
        ExtReal::from_f64(v)
    }

    #[test]
    fn value_at_zero_is_n() {
        assert_eq!(dirichlet(Bandwidth::new(50), ExtReal::ZERO).to_f64(), 101.0);
        assert_eq!(dirichlet(Bandwidth::new(50), x(-3.0)).to_f64(), 101.0);
    }

    #[test]
    fn zeros_at_multiples_of_one_over_n() {
        let bw = Bandwidth::new(7);
        for k in 1..15 {
            let t = ExtReal::from_f64(k as f64) / 15.0;
            let v = dirichlet(bw, t).to_f64();
            assert!(v.abs() < 1e-30, "k={k}: {v:e}");
        }
    }

    #[test]
    fn quarter_point_for_n1() {
        let v = dirichlet(Bandwidth::new(1), x(0.25));
        assert!((v - 1.0).abs().to_f64() < 1e-31);
    }

    #[test]
    fn derivative_parity() {
        let bw = Bandwidth::new(10);
        assert!(dirichlet_d1(bw, ExtReal::ZERO).is_zero());
        for t in [0.013, 0.2, 0.37] {
            let a = dirichlet_d1(bw, x(t));
            let b = dirichlet_d1(bw, x(-t));
            assert!((a + b).abs().to_f64() <= 1e-28 * a.abs().to_f64());
            let a = dirichlet_d2(bw, x(t));
            let b = dirichlet_d2(bw, x(-t));
            assert!((a - b).abs().to_f64() <= 1e-28 * a.abs().to_f64());
        }
    }

    #[test]
    fn second_derivative_at_zero() {
        let bw = Bandwidth::new(4);
        let n = 9.0;
        let want = -n * (n * n - 1.0) * PI * PI / 3.0;
        let got = dirichlet_d2(bw, ExtReal::ZERO).to_f64();
        assert!((got - want).abs() <= 1e-14 * want.abs());
    }

    #[test]
    fn from_big_n_rejects_even() {
        assert!(Bandwidth::from_big_n(100).is_err());
        assert_eq!(Bandwidth::from_big_n(101).unwrap().n(), 50);
    }

    #[test]
    fn envelope_edges() {
        let bw = Bandwidth::new(20);
        let n = 41.0;
        let e = taylor_envelope(bw, 0.0).unwrap();
        assert_eq!((e.lower, e.upper), (n, n));
        let e = taylor_envelope(bw, 1.0 / n).unwrap();
        assert!(e.upper.abs() < 1e-12);
        assert!((e.lower - n * (1.0 - PI * PI / 6.0)).abs() < 1e-12);
        assert!(matches!(
            taylor_envelope(bw, 0.1),
            Err(KernelError::TaylorOutOfRange { .. })
        ));
        assert!(matches!(
            magnitude_envelope(bw, 0.0),
            Err(KernelError::MagnitudeOutOfRange(_))
        ));
        assert!(magnitude_envelope(bw, 0.6).is_err());
        let env = kernel_envelopes(bw, 0.3);
        assert!(env.taylor.is_err() && env.magnitude.is_ok());
    }
}
