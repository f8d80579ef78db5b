//! Dense matrices over a field; used for evaluation points and small rank
//! computations.

use alloc::vec::Vec;
use core::fmt;

use crate::fields::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// A point of the space of `n x n` matrices.
pub type MatrixPoint<F> = Matrix<F>;

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&self.field.fmt_elem(self.get(i, j)))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: alloc::vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_i64_rows(field: &F, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix literal");
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn field(&self) -> &F {
        &self.field
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

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.field.is_zero(a))
    }

    pub fn trace(&self) -> F::Elem {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            self.field.add_assign(&mut t, self.get(i, i));
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        let t = f.mul(a, b);
                        f.add_assign(&mut out.data[i * other.cols + j], &t);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Row echelon form in place; returns the rank.
    fn eliminate(&mut self, augment: Option<&mut Self>) -> usize {
        let f = self.field.clone();
        let mut aug = augment;
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(piv) = (rank..self.rows).find(|&r| !f.is_zero(self.get(r, col))) else {
                continue;
            };
            self.swap_rows(piv, rank);
            if let Some(a) = aug.as_deref_mut() {
                a.swap_rows(piv, rank);
            }
            let inv = f.inv(self.get(rank, col)).expect("nonzero pivot");
            self.scale_row(rank, &inv);
            if let Some(a) = aug.as_deref_mut() {
                a.scale_row(rank, &inv);
            }
            for r in 0..self.rows {
                if r == rank || f.is_zero(self.get(r, col)) {
                    continue;
                }
                let factor = self.get(r, col).clone();
                self.row_sub(r, rank, &factor);
                if let Some(a) = aug.as_deref_mut() {
                    a.row_sub(r, rank, &factor);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &F::Elem) {
        for j in 0..self.cols {
            let v = self.field.mul(&self.data[r * self.cols + j], s);
            self.data[r * self.cols + j] = v;
        }
    }

    // row[target] -= factor * row[source]
    fn row_sub(&mut self, target: usize, source: usize, factor: &F::Elem) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !self.field.is_zero(&s) {
                self.field.sub_mul_assign(&mut self.data[target * self.cols + j], factor, &s);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate(None)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let mut work = self.clone();
        let mut inv = Self::identity(&self.field, self.rows);
        (work.eliminate(Some(&mut inv)) == self.rows).then_some(inv)
    }

    /// Entries as `(row, col, value)` with zero-based indices, skipping zeros.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(|(k, v)| (k / self.cols, k % self.cols, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};
    use alloc::vec;

    #[test]
    fn rank_and_inverse() {
        let q = Rationals;
        let m = Matrix::from_i64_rows(&q, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
        assert!(m.inverse().is_none());
        let g = Matrix::from_i64_rows(&q, &[vec![2, 1], vec![1, 1]]);
        let gi = g.inverse().unwrap();
        assert_eq!(g.mul(&gi), Matrix::identity(&q, 2));
        let f2 = PrimeField::new(2).unwrap();
        let h = Matrix::from_i64_rows(&f2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(h.rank(), 1);
    }

    #[test]
    fn shift_block_powers() {
        let q = Rationals;
        let j = Matrix::from_i64_rows(&q, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert_eq!(j.pow(2).rank(), 1);
        assert!(j.pow(3).is_zero());
        assert_eq!(j.trace(), q.zero());
    }
}
