//! Dense matrices over a prime field.
//!
//! Everything here is exact. The matrices are small (a handful of rows per
//! poset point), so a row-major `Vec<u32>` with straightforward Gaussian
//! elimination is all that is needed.

use crate::error::{Error, Result};
use crate::field::Field;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c) % field.prime());
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a `rows x cols` matrix from integer rows, reducing every entry
    /// into the field. An empty row list yields a `rows x cols` zero matrix
    /// only when `rows == 0`.
    pub fn from_rows(field: Field, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {rows}x{cols} matrix, got {} rows",
                entries.len()
            )));
        }
        Ok(Self::from_fn(field, rows, cols, |r, c| field.reduce(entries[r][c])))
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u32>]) -> Self {
        let cols = columns.len();
        Self::from_fn(field, rows, cols, |r, c| columns[c][r])
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.prime();
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Entries as signed representatives, row by row.
    pub fn to_signed_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| self.field.signed(v)).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Matrix product. Panics when the inner dimensions differ.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in product");
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field;
        let p = f.prime() as u64;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |r, c| f.add(self.get(r, c), other.get(r, c)))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |r, c| f.sub(self.get(r, c), other.get(r, c)))
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        Matrix::from_fn(f, self.rows, self.cols, |r, c| f.mul(s, self.get(r, c)))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(inv, m.get(row, c));
                m.data[row * m.cols + c] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// A basis of the null space, as the columns of a `cols x (cols - rank)` matrix.
    pub fn kernel_basis(&self) -> Matrix {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// Solves `self * x = b`. Returns `Ok(None)` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = Matrix::from_fn(self.field, self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                b[r]
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        let mut cols = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            match self.solve(&rhs.column(c))? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(self.field, self.cols, &cols)))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Some(Matrix::zeros(f, 0, 0));
        }
        let aug = Matrix::from_fn(f, n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c)
            } else if c - n == r {
                1
            } else {
                0
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(f, n, n, |i, j| r.get(i, n + j)))
    }

    /// Columns of `self` at the pivot positions: a basis of the column space
    /// taken from the original columns.
    pub fn column_space_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.field, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.get(r, c)
            } else {
                other.get(r - self.rows, c)
            }
        })
    }

    pub fn block_diag(field: Field, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    /// `col[target] += s * col[source]`.
    pub fn add_column_multiple(&mut self, target: usize, source: usize, s: u32) {
        let f = self.field;
        for r in 0..self.rows {
            let v = f.add(self.get(r, target), f.mul(s, self.get(r, source)));
            self.data[r * self.cols + target] = v;
        }
    }

    pub fn scale_column(&mut self, c: usize, s: u32) {
        let f = self.field;
        for r in 0..self.rows {
            let v = f.mul(s, self.get(r, c));
            self.data[r * self.cols + c] = v;
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {:?} {:?}", self.rows, self.cols, self.field, self.to_signed_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf31() -> Field {
        Field::default()
    }

    #[test]
    fn rank_examples() {
        let f = gf31();
        assert_eq!(Matrix::zeros(f, 0, 0).rank(), 0);
        assert_eq!(Matrix::identity(f, 3).rank(), 3);
        let m = Matrix::from_rows(f, 2, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = gf31();
        assert_eq!(Matrix::identity(f, 4).kernel_basis().cols(), 0);
        let z = Matrix::zeros(f, 2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
        let m = Matrix::from_rows(f, 1, 2, &[vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // spans (1, -1)
        let v = k.column(0);
        assert_eq!(f.mul(v[0], f.neg(1)), v[1]);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let f = gf31();
        let b = vec![3, 7, 11];
        assert_eq!(Matrix::identity(f, 3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(f, 3, 3).solve(&b).unwrap(), None);
        let two = Matrix::from_rows(f, 1, 1, &[vec![2]]).unwrap();
        assert_eq!(two.solve(&[1]).unwrap(), Some(vec![16]));
        assert!(two.solve(&[1, 2]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf31();
        let m = Matrix::from_rows(f, 2, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        let sing = Matrix::from_rows(f, 2, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.inverse().is_none());
        assert_eq!(Matrix::zeros(f, 0, 0).inverse(), Some(Matrix::zeros(f, 0, 0)));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..31, r * c)
                .prop_map(move |v| Matrix::from_fn(Field::default(), r, c, |i, j| v[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.cols(), m.rank() + k.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn solve_is_exact(m in arb_matrix(), seed in proptest::collection::vec(0u32..31, 6)) {
            let b: Vec<u32> = seed.into_iter().take(m.rows()).chain(std::iter::repeat(0)).take(m.rows()).collect();
            if let Some(x) = m.solve(&b).unwrap() {
                prop_assert_eq!(m.mul_vec(&x), b);
            }
            // a right-hand side inside the column space is always solvable
            let x0: Vec<u32> = (0..m.cols() as u32).collect();
            let b0 = m.mul_vec(&x0);
            let x = m.solve(&b0).unwrap();
            prop_assert!(x.is_some());
            prop_assert_eq!(m.mul_vec(&x.unwrap()), b0);
        }
    }
}
