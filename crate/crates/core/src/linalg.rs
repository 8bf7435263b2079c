//! Dense matrices over a [`Field`] with exact elimination.
//!
//! Matrices are stored row-major. Vectors are plain `Vec<F>` and are treated as
//! coordinate columns throughout the crate.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(columns: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| F::from_int(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "add: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "sub: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul: inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let v = a.clone() * b.clone();
                        out[(i, j)] = out[(i, j)].clone() + v;
                    }
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "mul_vec: length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `[self other]` side by side.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack: row counts differ");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack: column counts differ");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)].clone())
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(r, c) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = F::one() / self[(r, c)].clone();
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = self[(r, j)].clone() * inv.clone();
                }
            }
            let pivot_row: Vec<(usize, F)> =
                (c..self.cols).filter(|&j| !self[(r, j)].is_zero()).map(|j| (j, self[(r, j)].clone())).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)].clone();
                if f.is_negligible() {
                    if !F::EXACT {
                        self[(i, c)] = F::zero();
                    }
                    continue;
                }
                for (j, v) in &pivot_row {
                    self[(i, *j)] = self[(i, *j)].clone() - f.clone() * v.clone();
                }
                if !F::EXACT {
                    self[(i, c)] = F::zero();
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn pick_pivot(&self, from: usize, c: usize) -> Option<usize> {
        if F::EXACT {
            (from..self.rows).find(|&i| !self[(i, c)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&i| !self[(i, c)].is_negligible())
                .max_by(|&a, &b| self[(a, c)].abs().partial_cmp(&self[(b, c)].abs()).unwrap())
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns span the null space `{v : self·v = 0}`.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k[(f, idx)] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, idx)] = -r[(row, f)].clone();
            }
        }
        k
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[F]) -> Result<Option<Vec<F>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side has {} entries, matrix has {} rows", b.len(), self.rows)));
        }
        let aug = self.hstack(&Matrix::from_columns(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Solves `self·X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Self) -> Result<Option<Self>> {
        if b.rows != self.rows {
            return Err(Error::Dimension("solve_matrix: row counts differ".into()));
        }
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = r[(row, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Self::identity(self.rows)).ok()??;
        (self.mul(&x) == Self::identity(self.rows)).then_some(x)
    }

    /// Kronecker product: entry `(i·rb + k, j·cb + l) = a(i,j)·b(k,l)`.
    pub fn kron(&self, other: &Self) -> Self {
        let (rb, cb) = other.shape();
        let mut m = Self::zeros(self.rows * rb, self.cols * cb);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            m[(i * rb + k, j * cb + l)] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        m
    }

    /// A basis (as columns) of the column space, taken from the original columns.
    pub fn column_space(&self) -> Self {
        let (_, pivots) = self.rref();
        Matrix::from_columns(&pivots.iter().map(|&p| self.column(p)).collect::<Vec<_>>(), self.rows)
    }

    /// Stacks the columns into one vector (column-major vectorisation).
    pub fn vectorize(&self) -> Vec<F> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Rank of the span of a list of vectors of common length `len`.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(vectors, len).rank()
}

/// Whether `v` lies in the column space of `basis`.
pub fn in_span<F: Field>(basis: &Matrix<F>, v: &[F]) -> bool {
    if basis.cols() == 0 {
        return v.iter().all(|x| x.is_zero());
    }
    matches!(basis.solve(v), Ok(Some(_)))
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<F: Field>(a: &[F], c: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn unit_vec<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;

    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
