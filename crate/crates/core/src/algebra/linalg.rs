//! Small dense linear algebra for linear quotient maps.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch);
        }
        Ok(Matrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(<[T]>::to_vec).collect()
    }

    pub fn scaled(&self, s: T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    /// `A x`
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// `A^T z`
    pub fn apply_transpose(&self, z: &[T]) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) * z[i]).sum())
            .collect()
    }

    /// `A A^T`
    pub fn gram(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| {
                (0..self.rows)
                    .map(|k| (0..self.cols).map(|j| self.get(i, j) * self.get(k, j)).sum())
                    .collect()
            })
            .collect()
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    lower: Vec<Vec<T>>,
}

impl<T: Scalar> Cholesky<T> {
    /// Fails with `RankDeficientMap` when a pivot is not clearly positive.
    pub fn new(a: &[Vec<T>]) -> Result<Self> {
        let n = a.len();
        let scale = (0..n).map(|i| a[i][i].abs()).fold(T::zero(), T::max);
        let floor = scale * T::epsilon() * T::from_usize(64 * n.max(1)).unwrap();
        let mut lower = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i][j];
                for k in 0..j {
                    s -= lower[i][k] * lower[j][k];
                }
                if i == j {
                    if !(s > floor) {
                        return Err(Error::RankDeficientMap);
                    }
                    lower[i][i] = s.sqrt();
                } else {
                    lower[i][j] = s / lower[j][j];
                }
            }
        }
        Ok(Cholesky { lower })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lower.len();
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                let t = self.lower[i][k] * y[k];
                y[i] -= t;
            }
            y[i] /= self.lower[i][i];
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let t = self.lower[k][i] * y[k];
                y[i] -= t;
            }
            y[i] /= self.lower[i][i];
        }
        y
    }
}

/// Orthonormal basis of `ker A`, given the projector onto the row space.
pub fn kernel_basis<T: Scalar>(cols: usize, row_projector: impl Fn(&[T]) -> Vec<T>, dim: usize) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(dim);
    for e in 0..cols {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![T::zero(); cols];
        v[e] = T::one();
        let p = row_projector(&v);
        for (vi, pi) in v.iter_mut().zip(&p) {
            *vi -= *pi;
        }
        // two passes of Gram-Schmidt for stability
        for _ in 0..2 {
            for b in &basis {
                let c: T = v.iter().zip(b).map(|(x, y)| *x * *y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * *bi;
                }
            }
        }
        let norm = v.iter().map(|x| *x * *x).sum::<T>().sqrt();
        if norm > T::of(1e-8) {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// Solve a small dense symmetric system by Gaussian elimination with partial pivoting.
pub fn solve_dense<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= T::min_positive_value() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let t = f * a[col][c];
                a[r][c] -= t;
            }
            let t = f * b[col];
            b[r] -= t;
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let s: T = ((i + 1)..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}
