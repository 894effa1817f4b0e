//! Exact rational linear algebra: a column-sparse matrix for chain maps and
//! dense row reduction for homology.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sparse matrix stored by columns; each column holds `(row, value)` pairs
/// sorted by row with no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from per-column entry maps, dropping zeros.
    pub fn from_column_maps(rows: usize, columns: Vec<BTreeMap<usize, Rational>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .inspect(|(r, _)| assert!(*r < rows, "row {r} out of range {rows}"))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn from_dense(dense: &[Vec<Rational>], cols: usize) -> Self {
        let rows = dense.len();
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in dense.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[j].push((i, v.clone()));
                }
            }
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        let col = &self.columns[j];
        match col.binary_search_by_key(&i, |(r, _)| *r) {
            Ok(k) => col[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, b) in rcol {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc
            })
            .collect();
        SparseMatrix::from_column_maps(self.rows, columns)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Rational::zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.columns[j] {
                out[*i] += a * x;
            }
        }
        out
    }

    /// Kronecker product; entry `((i1, i2), (j1, j2))` sits at row
    /// `i1 * rhs.rows + i2` and column `j1 * rhs.cols + j2`.
    pub fn kron(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut columns = Vec::with_capacity(cols);
        for lcol in &self.columns {
            for rcol in &rhs.columns {
                let mut col = Vec::with_capacity(lcol.len() * rcol.len());
                for (i1, a) in lcol {
                    for (i2, b) in rcol {
                        col.push((i1 * rhs.rows + i2, a * b));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns. Pivots are taken as the first nonzero entry in row order.
pub fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut dense = m.to_dense();
    rref(&mut dense, m.cols()).len()
}

/// Basis of the null space of `m`, one vector per free column, in column
/// order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let mut dense = m.to_dense();
    let pivots = rref(&mut dense, cols);
    let mut is_pivot = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -dense[r][free].clone();
            }
            v
        })
        .collect()
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one() || q.denom().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        rational(n)
    }

    #[test]
    fn product_and_kron_agree_with_dense() {
        let a = SparseMatrix::from_dense(&[vec![q(1), q(2)], vec![q(0), q(-1)]], 2);
        let b = SparseMatrix::from_dense(&[vec![q(3)], vec![q(4)]], 1);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense(), vec![vec![q(11)], vec![q(-4)]]);
        let k = a.kron(&SparseMatrix::identity(2));
        assert_eq!(k.get(0, 2), q(2));
        assert_eq!(k.get(1, 3), q(2));
        assert_eq!(k.get(3, 3), q(-1));
        assert_eq!(k.trace(), q(0));
    }

    #[test]
    fn kernel_of_hollow_triangle_boundary() {
        // edges (a,b), (a,c), (b,c) against vertices a, b, c
        let d1 = SparseMatrix::from_dense(
            &[vec![q(-1), q(-1), q(0)], vec![q(1), q(0), q(-1)], vec![q(0), q(1), q(1)]],
            3,
        );
        assert_eq!(rank(&d1), 2);
        let ker = kernel_basis(&d1);
        assert_eq!(ker.len(), 1);
        assert!(d1.apply(&ker[0]).iter().all(Zero::is_zero));
    }
}
