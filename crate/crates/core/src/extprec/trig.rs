//! `sin(πx)` / `cos(πx)` in double-double.
//!
//! The argument is reduced exactly to `x = 2k + q/2 + s` with `|s| <= 1/4`,
//! then both functions are evaluated on `s` with truncated Taylor series whose
//! coefficients `(-1)^k π^(2k+1)/(2k+1)!` and `(-1)^k π^(2k)/(2k)!` were
//! rounded from a 60-digit evaluation and are stored as bit patterns.

use super::{two_sum, ExtReal};

// (hi, lo) bit pairs of (-1)^k π^(2k+1) / (2k+1)!, k = 0..15
const SIN_COEFFS: [(u64, u64); 15] = [
    (0x400921fb54442d18, 0x3ca1a62633145c07),
    (0xc014abbce625be53, 0x3cb05511c68476a8),
    (0x400466bc6775aae2, 0xbc96dc0cbddb0fc3),
    (0xbfe32d2cce62bd86, 0x3c8066847a026e69),
    (0x3fb50783487ee782, 0xbc51be14e6e8854a),
    (0xbf7e3074fde8871f, 0xbc188ef203b0a336),
    (0x3f3e8f434d018d63, 0x3bc94682b2571263),
    (0xbef6fadb9f155744, 0x3b9bab97c50b4cd0),
    (0x3eaaaec32af93359, 0x3b34fe55050e576a),
    (0xbe58a404211f9547, 0xbab6d424c0620248),
    (0x3e02877020d52cf0, 0xbaac9db31d99b9a3),
    (0xbda7215f879e1ac9, 0x3a4a2cc59fc2e3e8),
    (0x3d4859c594ba4573, 0x39d46446588874ec),
    (0xbce5e91aac4928db, 0x39836e8311afce96),
    (0x3c810b5242e256cc, 0xb8f163d6ee411feb),
];

// (hi, lo) bit pairs of (-1)^k π^(2k) / (2k)!, k = 0..16
const COS_COEFFS: [(u64, u64); 16] = [
    (0x3ff0000000000000, 0x0000000000000000),
    (0xc013bd3cc9be45de, 0xbcb692b71366cc04),
    (0x40103c1f081b5ac4, 0xbcb32b33f87fc145),
    (0xbff55d3c7e3cbffa, 0x3c4d582920937625),
    (0x3fce1f506891babb, 0xbc37362f495c096d),
    (0xbf9a6d1f2a204a8c, 0x3c35961232276df6),
    (0x3f5f9d38a3763cc3, 0xbbfc8a14c8bd6bc5),
    (0xbf1b6e24f44b128f, 0xbba6de1e0a0c23b9),
    (0x3ed20c62c2f2d7f5, 0xbb75a3cd1a11c7a2),
    (0xbe82a0c591af8314, 0xbb2215803afbd5f8),
    (0x3e2ef6e308d6d1c4, 0xbacc5f7779fbdd48),
    (0xbdd52ae4120fde27, 0x3a776dd247cd9002),
    (0x3d7838d8f4321800, 0xb9f453680e7f5659),
    (0xbd1789d662bb5482, 0xb9701d70ae199b04),
    (0x3cb3aab85bac2365, 0xb94b618dab265a90),
    (0xbc4c8ed0a80ad0c3, 0xb8bb4eedfa1adc15),
];

#[inline]
fn coeff(pair: (u64, u64)) -> ExtReal {
    ExtReal {
        hi: f64::from_bits(pair.0),
        lo: f64::from_bits(pair.1),
    }
}

fn horner(coeffs: &[(u64, u64)], x: ExtReal) -> ExtReal {
    let mut acc = coeff(coeffs[coeffs.len() - 1]);
    for &c in coeffs[..coeffs.len() - 1].iter().rev() {
        acc = acc * x + coeff(c);
    }
    acc
}

/// `x - period * round(x / period)` for `period` in {1, 2}, exact.
///
/// The subtraction acts on `hi` only, where it is exact because both operands
/// are multiples of `ulp(hi)`; adding `lo` back is an exact two-sum.
pub(super) fn reduce_mod(x: ExtReal, period: f64) -> ExtReal {
    let k = (x.hi / period).round() * period;
    let (h, l) = two_sum(x.hi - k, x.lo);
    // lo may push the value just past ±period/2
    let half = 0.5 * period;
    if h > half || (h == half && l > 0.0) {
        let (h2, l2) = two_sum(h - period, l);
        ExtReal { hi: h2, lo: l2 }
    } else if h < -half || (h == -half && l < 0.0) {
        let (h2, l2) = two_sum(h + period, l);
        ExtReal { hi: h2, lo: l2 }
    } else {
        ExtReal { hi: h, lo: l }
    }
}

pub(super) fn sincos_pi(x: ExtReal) -> (ExtReal, ExtReal) {
    if !x.is_finite() {
        let nan = ExtReal::from_f64(f64::NAN);
        return (nan, nan);
    }
    let r = reduce_mod(x, 2.0);
    let q = (2.0 * r.hi).round();
    let (h, l) = two_sum(r.hi - 0.5 * q, r.lo);
    let s = ExtReal { hi: h, lo: l };

    let s2 = s * s;
    let sp = if s.is_zero() {
        ExtReal::ZERO
    } else {
        s * horner(&SIN_COEFFS, s2)
    };
    let cp = horner(&COS_COEFFS, s2);

    match (q as i64).rem_euclid(4) {
        0 => (sp, cp),
        1 => (cp, -sp),
        2 => (-sp, -cp),
        _ => (-cp, sp),
    }
}
