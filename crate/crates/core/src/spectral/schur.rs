//! Two-by-two block partitions of the Gram matrix and the Schur complement
//! factorization `K = L⁻¹ · diag(K₁, K₂ − B K₁⁻¹ B*) · U⁻¹` with
//! `L = [[I, 0], [−B K₁⁻¹, I]]` and `U = [[I, −K₁⁻¹ B*], [0, I]]`.

use super::{build_gram, DdMatrix, SpectralError};
use crate::nodes::{NodeSet, Pair};

/// `K = [[K₁, B*], [B, K₂]]` after reordering the nodes by `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedGram {
    pub k1: DdMatrix,
    pub k2: DdMatrix,
    /// Lower-left block.
    pub b: DdMatrix,
    /// Node indices in block order: the first `k1.rows()` form `K₁`.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurFactors {
    pub lower: DdMatrix,
    pub block_diag: DdMatrix,
    pub upper: DdMatrix,
    /// `K₂ − B K₁⁻¹ B*`.
    pub complement: DdMatrix,
}

impl PartitionedGram {
    /// Splits a square matrix after reordering; the first `split` indices of
    /// `order` form the leading block.
    pub fn from_matrix(k: &DdMatrix, order: Vec<usize>, split: usize) -> Self {
        assert!(k.is_square() && order.len() == k.rows() && split <= order.len());
        let (first, second) = order.split_at(split);
        PartitionedGram {
            k1: k.select(first, first),
            k2: k.select(second, second),
            b: k.select(second, first),
            order,
        }
    }

    /// Leading block is the single node `pair.0`, its partner leads `K₂`.
    pub fn one_pair(ns: &NodeSet, pair: Pair) -> Self {
        let (a, b) = pair;
        let mut order = vec![a, b];
        order.extend((0..ns.len()).filter(|&i| i != a && i != b));
        PartitionedGram::from_matrix(build_gram(ns).matrix(), order, 1)
    }

    /// Leading block holds the first node of every pair, the trailing block
    /// their partners in the same order.
    pub fn pairwise(ns: &NodeSet, pairing: &[Pair]) -> Self {
        let mut order: Vec<usize> = pairing.iter().map(|p| p.0).collect();
        order.extend(pairing.iter().map(|p| p.1));
        PartitionedGram::from_matrix(build_gram(ns).matrix(), order, pairing.len())
    }

    /// The reordered matrix `[[K₁, B*], [B, K₂]]`.
    pub fn assemble(&self) -> DdMatrix {
        DdMatrix::from_blocks(&self.k1, &self.b.transpose(), &self.b, &self.k2)
    }

    /// The same matrix with the roles of the blocks exchanged.
    pub fn swapped(&self) -> Self {
        let mut order = self.order[self.k1.rows()..].to_vec();
        order.extend_from_slice(&self.order[..self.k1.rows()]);
        PartitionedGram {
            k1: self.k2.clone(),
            k2: self.k1.clone(),
            b: self.b.transpose(),
            order,
        }
    }
}

pub fn schur_decompose(p: &PartitionedGram) -> Result<SchurFactors, SpectralError> {
    let n1 = p.k1.rows();
    let n2 = p.k2.rows();
    let k1_inv = p.k1.inverse()?;
    let bt = p.b.transpose();
    let b_k1inv = p.b.matmul(&k1_inv);
    let complement = p.k2.sub(&b_k1inv.matmul(&bt));

    let z12 = DdMatrix::zeros(n1, n2);
    let z21 = DdMatrix::zeros(n2, n1);
    let lower = DdMatrix::from_blocks(
        &DdMatrix::identity(n1),
        &z12,
        &b_k1inv.scale(-crate::ExtReal::ONE),
        &DdMatrix::identity(n2),
    );
    let block_diag = DdMatrix::from_blocks(&p.k1, &z12, &z21, &complement);
    let upper = DdMatrix::from_blocks(
        &DdMatrix::identity(n1),
        &k1_inv.matmul(&bt).scale(-crate::ExtReal::ONE),
        &z21,
        &DdMatrix::identity(n2),
    );
    Ok(SchurFactors {
        lower,
        block_diag,
        upper,
        complement,
    })
}

impl SchurFactors {
    /// `L⁻¹ · D · U⁻¹`, using that both factors are unit block-triangular.
    pub fn reconstruct(&self) -> DdMatrix {
        let n = self.lower.rows();
        let mut l_inv = self.lower.clone();
        let mut u_inv = self.upper.clone();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    l_inv[(i, j)] = -l_inv[(i, j)];
                    u_inv[(i, j)] = -u_inv[(i, j)];
                }
            }
        }
        l_inv.matmul(&self.block_diag).matmul(&u_inv)
    }
}
