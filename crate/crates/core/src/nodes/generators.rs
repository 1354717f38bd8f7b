//! Randomized node configurations.
//!
//! Every generator is a pure function of its parameters and seed. Positions
//! are accumulated in double-double so that gaps of order `10^-11/N` survive
//! next to positions close to 1.

use super::rng::Stream;
use super::{NodeSet, Pair};
use crate::extprec::ExtReal;
use crate::kernel::Bandwidth;

/// Decades spanned by the log-uniform separation `τ ∈ (10^-11, 1]`.
const TAU_DECADES: f64 = 11.0;

/// Bandwidth of the three-node comparison configuration.
pub const BDGY_N: u64 = 1001;
/// Bandwidth of the uniformly paired comparison configuration, `2^15 + 1`.
pub const LILI_N: u64 = (1 << 15) + 1;

fn build(bw: Bandwidth, gaps: impl IntoIterator<Item = f64>) -> NodeSet {
    let big_n = bw.n_f64();
    let mut t = vec![ExtReal::ZERO];
    let mut acc = ExtReal::ZERO;
    for g in gaps {
        acc += ExtReal::from_f64(g) / big_n;
        t.push(acc);
    }
    NodeSet::new(bw, t).expect("generator layout fits in [0, 1)")
}

/// `[(0,1), (2,3), …]`: the pairing of every generated configuration, in
/// sorted index order.
pub fn interleaved_pairing(m: usize) -> Vec<Pair> {
    (0..m / 2).map(|j| (2 * j, 2 * j + 1)).collect()
}

/// One nearly-colliding pair among `M` nodes: `N = 1 + 12(M−1)`,
/// `t_2 = τ/N`, then gaps `ρ_j/N` with `ρ_j ∈ (6, 12]`.
pub fn gen_one_pair(m: usize, seed: u64) -> NodeSet {
    assert!(m >= 3, "one-pair generator needs M >= 3");
    let bw = Bandwidth::new(6 * (m as u32 - 1));
    let mut rng = Stream::new(seed);
    let tau = rng.log_uniform_unit(TAU_DECADES);
    let rhos: Vec<f64> = (3..=m)
        .map(|_| rng.uniform_open_closed(6.0, 12.0))
        .collect();
    build(bw, std::iter::once(tau).chain(rhos))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseLayout {
    pub bw: Bandwidth,
    pub tau_max: f64,
    pub rho_min: f64,
}

/// `τ_max = 1/(4c²)`, `ρ_min = 10c²(ln⌊M/4⌋ + 1)` and `N` the smallest odd
/// integer exceeding `(cτ_max + 2ρ_min)·M/2`.
pub fn pairwise_layout(m: usize, c: f64) -> PairwiseLayout {
    let tau_max = 1.0 / (4.0 * c * c);
    let rho_min = 10.0 * c * c * (((m / 4) as f64).ln() + 1.0);
    let span = (c * tau_max + 2.0 * rho_min) * m as f64 / 2.0;
    let mut big_n = span.floor() as u64 + 1;
    if big_n.is_multiple_of(2) {
        big_n += 1;
    }
    PairwiseLayout {
        bw: Bandwidth::from_big_n(big_n).expect("odd by construction"),
        tau_max,
        rho_min,
    }
}

/// Pairs of nearly-colliding nodes: alternating gaps `τ_j/N` (pair) and
/// `ρ_j/N` (between pairs), `t_2 = τ/N`, `τ_j ∈ (τ, cτ]`,
/// `ρ_j ∈ (ρ_min, 2ρ_min]`.
pub fn gen_pairwise(m: usize, c: f64, seed: u64) -> NodeSet {
    assert!(
        m >= 4 && m.is_multiple_of(2),
        "pairwise generator needs even M >= 4"
    );
    assert!(c >= 1.0, "uniformity constant c must be >= 1");
    let layout = pairwise_layout(m, c);
    let mut rng = Stream::new(seed);
    let tau = rng.log_uniform_unit(TAU_DECADES);
    let mut gaps = vec![tau];
    for j in 3..=m {
        let g = if j % 2 == 1 {
            rng.uniform_open_closed(layout.rho_min, 2.0 * layout.rho_min)
        } else {
            rng.uniform_open_closed(tau, c * tau)
        };
        gaps.push(g);
    }
    build(layout.bw, gaps)
}

/// Three nodes `{0, τ/N, (τ+ρ)/N}` with `N = 1001`, `ρ ∈ (12, N/18 − τ]`,
/// so all nodes fit in an arc of length `1/18`.
pub fn gen_compare_bdgy(seed: u64) -> NodeSet {
    let bw = Bandwidth::from_big_n(BDGY_N).expect("odd");
    let mut rng = Stream::new(seed);
    let tau = rng.log_uniform_unit(TAU_DECADES);
    let rho = rng.uniform_open_closed(12.0, BDGY_N as f64 / 18.0 - tau);
    build(bw, [tau, rho])
}

/// Uniformly spaced pairs: anchors `(2j−2)/M`, partners at `+τ/N`,
/// `N = 2^15 + 1`.
pub fn gen_compare_lili(m: usize, seed: u64) -> NodeSet {
    assert!(
        m >= 2 && m.is_multiple_of(2),
        "paired generator needs even M"
    );
    let bw = Bandwidth::from_big_n(LILI_N).expect("odd");
    let mut rng = Stream::new(seed);
    let tau = rng.log_uniform_unit(TAU_DECADES);
    let offset = ExtReal::from_f64(tau) / bw.n_f64();
    let mut t = Vec::with_capacity(m);
    for j in 0..m / 2 {
        let anchor = ExtReal::from_f64((2 * j) as f64) / m as f64;
        t.push(anchor);
        t.push(anchor + offset);
    }
    NodeSet::new(bw, t).expect("paired layout fits in [0, 1)")
}

/// Well-separated nodes with normalized gaps in `(1, 5]` and
/// `N = 2n + 1`, `n` drawn from `[3M, 6M]`.
pub fn gen_well_separated(m: usize, seed: u64) -> NodeSet {
    assert!(m >= 2);
    let mut rng = Stream::new(seed);
    let n = 3 * m as u32 + (rng.uniform() * (3 * m + 1) as f64) as u32;
    let bw = Bandwidth::new(n);
    let gaps: Vec<f64> = (1..m).map(|_| rng.uniform_open_closed(1.0, 5.0)).collect();
    build(bw, gaps)
}
