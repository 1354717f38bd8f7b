//! `K = A A* = (D_n(t_i − t_j))_{i,j}` and the Vandermonde matrix itself.

use std::io::Write;

use num_complex::Complex64;

use super::{DdMatrix, SpectralError};
use crate::extprec::ExtReal;
use crate::kernel::{dirichlet, Bandwidth};
use crate::nodes::NodeSet;

/// Largest `M` accepted by the materialized Vandermonde matrix.
pub const MAX_ROWS: usize = 512;
/// Largest `N` accepted by the materialized Vandermonde matrix.
pub const MAX_COLS: u64 = 1 << 16;

/// Symmetric with constant diagonal `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    bw: Bandwidth,
    k: DdMatrix,
}

impl GramMatrix {
    pub fn bandwidth(&self) -> Bandwidth {
        self.bw
    }

    pub fn matrix(&self) -> &DdMatrix {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    /// Row-major text dump with a `# gram M=<M> N=<N>` header.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# gram M={} N={}", self.dim(), self.bw.N())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| self.k[(i, j)].to_sci_string(34))
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        w.flush()
    }
}

pub fn build_gram(ns: &NodeSet) -> GramMatrix {
    let bw = ns.bandwidth();
    let t = ns.positions();
    let m = t.len();
    let mut k = DdMatrix::zeros(m, m);
    let diag = ExtReal::from_f64(bw.n_f64());
    for i in 0..m {
        k[(i, i)] = diag;
        for j in i + 1..m {
            let v = dirichlet(bw, t[i] - t[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    GramMatrix { bw, k }
}

/// Rows `(z_j^k)_{|k| <= n}`, `z_j = e^{2πi t_j}`, materialized in binary64
/// from double-double phases.
#[derive(Debug, Clone)]
pub struct VandermondeMatrix {
    bw: Bandwidth,
    rows: Vec<Vec<Complex64>>,
}

impl VandermondeMatrix {
    pub fn new(ns: &NodeSet) -> Result<Self, SpectralError> {
        let bw = ns.bandwidth();
        if ns.len() > MAX_ROWS || bw.N() > MAX_COLS {
            return Err(SpectralError::SizeGuard {
                m: ns.len(),
                big_n: bw.N(),
            });
        }
        let n = bw.n() as i64;
        let rows = ns
            .positions()
            .iter()
            .map(|&t| {
                (-n..=n)
                    .map(|k| {
                        let (s, c) = (t * (2 * k) as f64).sincos_pi();
                        Complex64::new(c.to_f64(), s.to_f64())
                    })
                    .collect()
            })
            .collect();
        Ok(VandermondeMatrix { bw, rows })
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bw
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    /// `A A*` by explicit complex inner products.
    pub fn gram_f64(&self) -> Vec<Vec<Complex64>> {
        self.rows
            .iter()
            .map(|a| {
                self.rows
                    .iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| x * y.conj()).sum())
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_gram() {
        let ns = NodeSet::from_f64(Bandwidth::new(3), &[0.3]).unwrap();
        let g = build_gram(&ns);
        assert_eq!(g.dim(), 1);
        assert_eq!(g.matrix()[(0, 0)].to_f64(), 7.0);
    }

    #[test]
    fn two_node_gram_entries() {
        let bw = Bandwidth::new(50);
        let gap = ExtReal::from_f64(0.5) / 101.0;
        let ns = NodeSet::new(bw, vec![ExtReal::ZERO, gap]).unwrap();
        let g = build_gram(&ns);
        let d = dirichlet(bw, gap);
        assert_eq!(g.matrix()[(0, 1)], d);
        assert_eq!(g.matrix()[(1, 0)], d);
        assert!(g.matrix().is_symmetric());
    }

    #[test]
    fn dump_format() {
        let ns = NodeSet::from_f64(Bandwidth::new(2), &[0.0, 0.5]).unwrap();
        let mut buf = Vec::new();
        build_gram(&ns).write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# gram M=2 N=5"));
        let first: Vec<&str> = lines.next().unwrap().split(' ').collect();
        assert_eq!(first[0], "5.000000000000000000000000000000000e0");
    }

    #[test]
    fn vandermonde_rows_have_unit_entries() {
        let ns = NodeSet::from_f64(Bandwidth::new(4), &[0.1, 0.7]).unwrap();
        let a = VandermondeMatrix::new(&ns).unwrap();
        assert_eq!(a.rows()[0].len(), 9);
        for z in a.rows().iter().flatten() {
            assert!((z.norm() - 1.0).abs() < 1e-15);
        }
        let big = NodeSet::from_f64(Bandwidth::new(40_000), &[0.1]).unwrap();
        assert!(matches!(
            VandermondeMatrix::new(&big),
            Err(SpectralError::SizeGuard { .. })
        ));
    }
}
