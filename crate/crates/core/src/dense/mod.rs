//! Column-major dense storage, permutations, norms and the packed LU result.

mod factorization;
pub(crate) mod kernels;
mod level1;
pub mod mmio;
mod norms;
mod perm;

pub use factorization::Factorization;
pub(crate) use level1::{axpy, dot, rank1_sumsq};
pub(crate) use norms::nrm2;
pub use norms::{col_norm2, norm_one_inf, norm_one_two, op_norms};
pub use perm::Permutation;

use crate::error::{arg, LuError, Result};
use std::ops::{Index, IndexMut};

/// Dense real matrix stored column by column.
///
/// Constructors reject NaN and infinities. Entry writes through `IndexMut`
/// are not re-validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Wraps column-major `data`, checking its length and that every entry is finite.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return arg(format!("data length {} does not match {}x{}", data.len(), rows, cols));
        }
        if let Some(p) = data.iter().position(|x| !x.is_finite()) {
            return Err(LuError::NonFinite { row: p % rows.max(1), col: p / rows.max(1) });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from row slices, which all need the same length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return arg("ragged rows");
        }
        let mut data = vec![0.0; m * n];
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.as_ref().iter().enumerate() {
                data[i + j * m] = x;
            }
        }
        Matrix::from_col_major(m, n, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Matrix::from_col_major(rows, cols, data)
    }

    /// Internal constructor for buffers produced by our own kernels.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
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

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Row `i` copied into a vector.
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            let m = self.rows;
            for j in 0..self.cols {
                self.data.swap(a + j * m, b + j * m);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            let m = self.rows;
            let (lo, hi) = (a.min(b), a.max(b));
            let (left, right) = self.data.split_at_mut(hi * m);
            left[lo * m..(lo + 1) * m].swap_with_slice(&mut right[..m]);
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return arg(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        kernels::gemm(1.0, kernels::View::whole(self), kernels::View::whole(rhs), 0.0, &mut out);
        Ok(out)
    }

    /// Matrix-vector product `self * x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return arg(format!("vector length {} for {} columns", x.len(), self.cols));
        }
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, &aij) in y.iter_mut().zip(self.col(j)) {
                    *yi += aij * xj;
                }
            }
        }
        Ok(y)
    }

    /// Borrowed rectangular block starting at `(row0, col0)`.
    pub fn view(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> SubMatrix<'_> {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols, "view out of bounds");
        SubMatrix { data: &self.data, ld: self.rows, row0, col0, rows, cols }
    }

    /// The trailing block `self[k.., k..]`.
    pub fn trailing(&self, k: usize) -> SubMatrix<'_> {
        self.view(k, k, self.rows - k, self.cols - k)
    }

    pub fn as_view(&self) -> SubMatrix<'_> {
        self.view(0, 0, self.rows, self.cols)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}

/// Read-only rectangular window into a [`Matrix`].
#[derive(Clone, Copy, Debug)]
pub struct SubMatrix<'a> {
    data: &'a [f64],
    ld: usize,
    row0: usize,
    col0: usize,
    rows: usize,
    cols: usize,
}

impl<'a> SubMatrix<'a> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[self.row0 + i + (self.col0 + j) * self.ld]
    }

    /// Column `j` of the window as a contiguous slice.
    #[inline]
    pub fn col(&self, j: usize) -> &'a [f64] {
        let start = self.row0 + (self.col0 + j) * self.ld;
        &self.data[start..start + self.rows]
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            data.extend_from_slice(self.col(j));
        }
        Matrix::from_raw(self.rows, self.cols, data)
    }
}
