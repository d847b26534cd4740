//! Small dense matrices over a [`Scalar`]. Sizes here stay in the tens, so
//! row-major `Vec` storage and schoolbook products are adequate.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::scalar::{serde_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DenseMatrix<S: Scalar> {
    rows: usize,
    cols: usize,
    #[serde(with = "serde_scalar::vec")]
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * rhs[(l, j)].clone();
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> DenseMatrix<S> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Largest absolute entry over rows `r0..r1`, columns `c0..c1`.
    pub fn max_abs_in(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> S {
        let mut best = S::zero();
        for i in r0..r1.min(self.rows) {
            for j in c0..c1.min(self.cols) {
                let a = self[(i, j)].abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }

    pub fn max_abs(&self) -> S {
        self.max_abs_in(0, self.rows, 0, self.cols)
    }

    /// Determinant by Gaussian elimination with largest-magnitude pivoting.
    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let mut piv = c;
            for r in c + 1..n {
                if a[(r, c)].abs() > a[(piv, c)].abs() {
                    piv = r;
                }
            }
            if a[(piv, c)].is_zero() {
                return S::zero();
            }
            if piv != c {
                for j in 0..n {
                    a.data.swap(piv * n + j, c * n + j);
                }
                det = -det;
            }
            let p = a[(c, c)].clone();
            det = det * p.clone();
            for r in c + 1..n {
                let f = a[(r, c)].clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    a[(r, j)] = a[(r, j)].clone() - f.clone() * a[(c, j)].clone();
                }
            }
        }
        det
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution.
    pub fn unit_lower_inverse(&self) -> DenseMatrix<S> {
        let n = self.rows;
        let mut inv = Self::identity(n);
        for col in 0..n {
            for i in col + 1..n {
                let mut s = S::zero();
                for l in col..i {
                    s = s + self[(i, l)].clone() * inv[(l, col)].clone();
                }
                inv[(i, col)] = -s;
            }
        }
        inv
    }
}

impl<S: Scalar> Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Scalar> IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}
