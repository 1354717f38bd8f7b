//! Dense row-major matrices over [`ExtReal`].

use std::fmt;
use std::ops::{Index, IndexMut};

use super::SpectralError;
use crate::extprec::ExtReal;

#[derive(Clone, PartialEq)]
pub struct DdMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtReal>,
}

impl DdMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DdMatrix {
            rows,
            cols,
            data: vec![ExtReal::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DdMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ExtReal::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExtReal) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DdMatrix { rows, cols, data }
    }

    pub fn from_f64(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        DdMatrix {
            rows,
            cols,
            data: values.iter().map(|&v| ExtReal::from_f64(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[ExtReal] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [ExtReal] {
        &mut self.data
    }

    pub fn transpose(&self) -> Self {
        DdMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &DdMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = DdMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)] + a * rhs[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    fn zip(&self, rhs: &DdMatrix, f: impl Fn(ExtReal, ExtReal) -> ExtReal) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shapes differ"
        );
        DdMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &DdMatrix) -> Self {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &DdMatrix) -> Self {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: ExtReal) -> Self {
        DdMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(ExtReal) -> ExtReal) -> Self {
        DdMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> ExtReal {
        self.data.iter().map(|&a| a.sqr()).sum::<ExtReal>().sqrt()
    }

    pub fn max_abs(&self) -> ExtReal {
        self.data
            .iter()
            .map(|a| a.abs())
            .fold(ExtReal::ZERO, ExtReal::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// `self[rows, cols]` for index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        DdMatrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// `[[a, b], [c, d]]` from conforming blocks.
    pub fn from_blocks(a: &DdMatrix, b: &DdMatrix, c: &DdMatrix, d: &DdMatrix) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r1, c1) = (a.rows, a.cols);
        DdMatrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < r1, j < c1) {
                (true, true) => a[(i, j)],
                (true, false) => b[(i, j - c1)],
                (false, true) => c[(i - r1, j)],
                (false, false) => d[(i - r1, j - c1)],
            }
        })
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<DdMatrix, SpectralError> {
        if !self.is_square() {
            return Err(SpectralError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DdMatrix::identity(n);
        let scale = self.max_abs();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .abs()
                        .partial_cmp(&a[(j, col)].abs())
                        .expect("finite entries")
                })
                .expect("non-empty range");
            let p = a[(piv, col)];
            if p.is_zero() || p.abs().to_f64() <= scale.to_f64() * 1e-60 {
                return Err(SpectralError::Singular);
            }
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let r = p.recip();
            for j in 0..n {
                a[(col, j)] *= r;
                inv[(col, j)] *= r;
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let f = a[(i, col)];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a[(i, j)] - f * a[(col, j)];
                    a[(i, j)] = v;
                    let w = inv[(i, j)] - f * inv[(col, j)];
                    inv[(i, j)] = w;
                }
            }
        }
        Ok(inv)
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> ExtReal {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = ExtReal::ONE;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .abs()
                        .partial_cmp(&a[(j, col)].abs())
                        .expect("finite entries")
                })
                .expect("non-empty range");
            let p = a[(piv, col)];
            if p.is_zero() {
                return ExtReal::ZERO;
            }
            if piv != col {
                a.swap_rows(piv, col);
                det = -det;
            }
            det *= p;
            for i in col + 1..n {
                let f = a[(i, col)] / p;
                for j in col..n {
                    let v = a[(i, j)] - f * a[(col, j)];
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }
}

impl Index<(usize, usize)> for DdMatrix {
    type Output = ExtReal;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &ExtReal {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DdMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ExtReal {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DdMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:.6e}", self[(i, j)].to_f64()))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let m = DdMatrix::from_f64(3, 3, &[4.0, 1.0, 2.0, 1.0, 3.0, 0.0, 2.0, 0.0, 5.0]);
        let inv = m.inverse().unwrap();
        let id = m.matmul(&inv);
        let err = id.sub(&DdMatrix::identity(3)).max_abs().to_f64();
        assert!(err < 1e-30, "{err:e}");
        let det = m.determinant().to_f64();
        assert!((det - 43.0).abs() < 1e-28);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = DdMatrix::from_f64(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(m.inverse(), Err(SpectralError::Singular)));
        assert!(m.determinant().is_zero());
    }

    #[test]
    fn blocks_reassemble() {
        let m = DdMatrix::from_fn(4, 4, |i, j| ExtReal::from_f64((i * 4 + j) as f64));
        let (a, b) = (m.select(&[0], &[0]), m.select(&[0], &[1, 2, 3]));
        let (c, d) = (m.select(&[1, 2, 3], &[0]), m.select(&[1, 2, 3], &[1, 2, 3]));
        assert_eq!(DdMatrix::from_blocks(&a, &b, &c, &d), m);
    }
}
