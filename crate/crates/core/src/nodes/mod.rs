//! Node sets `t_1 < … < t_M` in `[0, 1)` with their bandwidth, the
//! wrap-around metric and the separation statistics `τ`, `ρ`, `c`.

mod format;
mod generators;
pub mod rng;

use std::fmt;

use crate::extprec::ExtReal;
use crate::kernel::Bandwidth;

pub use format::{read_nodes, write_nodes, FormatError};
pub use generators::{
    gen_compare_bdgy, gen_compare_lili, gen_one_pair, gen_pairwise, gen_well_separated,
    interleaved_pairing, pairwise_layout, PairwiseLayout, BDGY_N, LILI_N,
};

/// Index pair `(i, j)`, `i < j`, into the sorted node list.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NodeError {
    #[error("a node set needs at least one node")]
    Empty,
    #[error("node {index} = {value:e} lies outside [0, 1)")]
    OutOfRange { index: usize, value: f64 },
    #[error("nodes {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("M = {m} nodes need N >= M, got N = {big_n}")]
    TooManyNodes { m: usize, big_n: u64 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("classification needs M >= 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("ambiguous pairing: node {1} is within 1/N of both {0} and {2}")]
    AmbiguousPairing(usize, usize, usize),
    #[error("{pairs} nearly-colliding pairs do not cover all {m} nodes")]
    PartialPairing { pairs: usize, m: usize },
    #[error("pairing hint rejected: {0}")]
    BadHint(String),
}

/// Sorted node parameters together with the bandwidth.
#[derive(Clone, PartialEq)]
pub struct NodeSet {
    bw: Bandwidth,
    t: Vec<ExtReal>,
}

impl NodeSet {
    /// Sorts the positions and validates them; requires `1 <= M <= N`.
    pub fn new(bw: Bandwidth, mut t: Vec<ExtReal>) -> Result<Self, NodeError> {
        if t.is_empty() {
            return Err(NodeError::Empty);
        }
        for (index, v) in t.iter().enumerate() {
            if !(v.is_finite() && !v.is_sign_negative() && *v < ExtReal::ONE) {
                return Err(NodeError::OutOfRange {
                    index,
                    value: v.to_f64(),
                });
            }
        }
        t.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if let Some(i) = t.windows(2).position(|w| w[0] == w[1]) {
            return Err(NodeError::Duplicate(i, i + 1));
        }
        if t.len() as u64 > bw.N() {
            return Err(NodeError::TooManyNodes {
                m: t.len(),
                big_n: bw.N(),
            });
        }
        Ok(NodeSet { bw, t })
    }

    pub fn from_f64(bw: Bandwidth, t: &[f64]) -> Result<Self, NodeError> {
        NodeSet::new(bw, t.iter().map(|&v| ExtReal::from_f64(v)).collect())
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bw
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn positions(&self) -> &[ExtReal] {
        &self.t
    }

    /// Wrap distance between nodes `i` and `j`.
    pub fn gap(&self, i: usize, j: usize) -> ExtReal {
        wrap_distance_ext(self.t[i], self.t[j])
    }

    /// Sub-configuration keeping only the listed nodes.
    pub fn subset(&self, keep: &[usize]) -> Result<NodeSet, NodeError> {
        NodeSet::new(self.bw, keep.iter().map(|&i| self.t[i]).collect())
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NodeSet")
            .field("N", &self.bw.N())
            .field("t", &self.t.iter().map(|v| v.to_f64()).collect::<Vec<_>>())
            .finish()
    }
}

/// `min_r |a − b + r|` in double-double; the result lies in `[0, 1/2]`.
pub fn wrap_distance_ext(a: ExtReal, b: ExtReal) -> ExtReal {
    (a - b).frac_centered().abs()
}

pub fn wrap_distance(a: f64, b: f64) -> f64 {
    wrap_distance_ext(ExtReal::from_f64(a), ExtReal::from_f64(b)).to_f64()
}

/// Separation statistics of a node set.
///
/// `rho` is `+∞` when no distance outside the designated pairs exists (the
/// two-node one-pair configuration). `c` is present only when a pairing is.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationStats {
    /// `N · min_{j≠ℓ} |t_j − t_ℓ|`.
    pub tau: f64,
    /// Smallest wrap distance (not scaled by `N`), kept in full precision.
    pub min_gap: ExtReal,
    pub rho: f64,
    pub c: Option<f64>,
    pub pairing: Option<Vec<Pair>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigClass {
    WellSeparated,
    OnePair {
        tau: f64,
        rho: f64,
    },
    Pairwise {
        tau: f64,
        rho: f64,
        c: f64,
        pairing: Vec<Pair>,
    },
}

impl ConfigClass {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigClass::WellSeparated => "well-separated",
            ConfigClass::OnePair { .. } => "one-pair",
            ConfigClass::Pairwise { .. } => "pairwise",
        }
    }
}

fn all_gaps(ns: &NodeSet) -> Vec<(usize, usize, ExtReal)> {
    let m = ns.len();
    let mut out = Vec::with_capacity(m * (m.saturating_sub(1)) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j, ns.gap(i, j)));
        }
    }
    out
}

/// Separation statistics for a designated pairing, without checking that the
/// pairs are actually nearly colliding.
pub fn pairing_stats(ns: &NodeSet, pairing: &[Pair]) -> SeparationStats {
    let big_n = ns.bandwidth().n_f64();
    let gaps = all_gaps(ns);
    let is_pair = |i: usize, j: usize| {
        pairing
            .iter()
            .any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j))
    };

    let min_gap = gaps
        .iter()
        .map(|g| g.2)
        .fold(ExtReal::from_f64(f64::INFINITY), ExtReal::min);
    let cross = gaps
        .iter()
        .filter(|g| !is_pair(g.0, g.1))
        .map(|g| g.2)
        .fold(ExtReal::from_f64(f64::INFINITY), ExtReal::min);
    let c = if pairing.is_empty() {
        None
    } else {
        let pg: Vec<ExtReal> = pairing.iter().map(|&(a, b)| ns.gap(a, b)).collect();
        let lo = pg
            .iter()
            .copied()
            .fold(ExtReal::from_f64(f64::INFINITY), ExtReal::min);
        let hi = pg.iter().copied().fold(ExtReal::ZERO, ExtReal::max);
        Some((hi / lo).to_f64())
    };
    SeparationStats {
        tau: (min_gap * big_n).to_f64(),
        min_gap,
        rho: if cross.is_finite() {
            (cross * big_n).to_f64()
        } else {
            f64::INFINITY
        },
        c,
        pairing: if pairing.is_empty() {
            None
        } else {
            Some(pairing.to_vec())
        },
    }
}

fn validate_hint(m: usize, hint: &[Pair]) -> Result<Vec<Pair>, ClassifyError> {
    let mut seen = vec![false; m];
    let mut out = Vec::with_capacity(hint.len());
    for &(a, b) in hint {
        if a >= m || b >= m || a == b {
            return Err(ClassifyError::BadHint(format!("invalid pair ({a}, {b})")));
        }
        for k in [a, b] {
            if seen[k] {
                return Err(ClassifyError::BadHint(format!("node {k} appears twice")));
            }
            seen[k] = true;
        }
        out.push((a.min(b), a.max(b)));
    }
    out.sort_unstable();
    Ok(out)
}

/// Classifies a node set as well-separated, one nearly-colliding pair, or
/// pairs of nearly-colliding nodes.
///
/// Without a hint, two nodes form a pair when their wrap distance is at most
/// `1/N`. A valid pairwise configuration must be a perfect matching; it is
/// relabeled canonically by listing pairs in order of their first node, so
/// pair `j` couples the `j`-th node of the first half with the `j`-th node of
/// the second half. With a hint the designated pairs are used instead, but
/// they must still satisfy the class invariants.
pub fn classify(
    ns: &NodeSet,
    pairing_hint: Option<&[Pair]>,
) -> Result<(ConfigClass, SeparationStats), ClassifyError> {
    let m = ns.len();
    if m < 2 {
        return Err(ClassifyError::TooFewNodes(m));
    }
    let big_n = ns.bandwidth().n_f64();
    let close = |g: ExtReal| g * big_n <= ExtReal::ONE;

    let pairing = match pairing_hint {
        Some(hint) => {
            let p = validate_hint(m, hint)?;
            if let Some(&(a, b)) = p.iter().find(|&&(a, b)| !close(ns.gap(a, b))) {
                return Err(ClassifyError::BadHint(format!(
                    "pair ({a}, {b}) is farther apart than 1/N"
                )));
            }
            p
        }
        None => {
            let mut partner: Vec<Option<usize>> = vec![None; m];
            let mut pairs = Vec::new();
            for (i, j, g) in all_gaps(ns) {
                if !close(g) {
                    continue;
                }
                for (x, y) in [(i, j), (j, i)] {
                    if let Some(other) = partner[x] {
                        return Err(ClassifyError::AmbiguousPairing(other, x, y));
                    }
                }
                partner[i] = Some(j);
                partner[j] = Some(i);
                pairs.push((i, j));
            }
            pairs
        }
    };

    let stats = pairing_stats(ns, &pairing);
    if stats.rho <= 1.0 {
        return Err(ClassifyError::BadHint(format!(
            "non-paired nodes are only {:.3}/N apart",
            stats.rho
        )));
    }
    let class = match pairing.len() {
        0 => ConfigClass::WellSeparated,
        1 => ConfigClass::OnePair {
            tau: stats.tau,
            rho: stats.rho,
        },
        k if 2 * k == m && m >= 4 => ConfigClass::Pairwise {
            tau: stats.tau,
            rho: stats.rho,
            c: stats.c.unwrap_or(1.0),
            pairing: pairing.clone(),
        },
        k => return Err(ClassifyError::PartialPairing { pairs: k, m }),
    };
    Ok((class, stats))
}
