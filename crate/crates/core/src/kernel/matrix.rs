use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use super::{Scalar, C64};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from row-major data. Panics when the length is wrong.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Mat { rows, cols, data }
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = *x;
            }
        }
        m
    }

    pub fn diag(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[T]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: core::ops::Range<usize>) -> Self {
        Self::from_fn(self.rows, range.len(), |i, j| self[(i, range.start + j)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == T::ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * *b;
                }
            }
        }
        out
    }

    /// `selfᴴ · rhs` without materialising the adjoint.
    pub fn adjoint_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_matmul dimension mismatch");
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = rhs.row(k);
            for (i, a) in a_row.iter().enumerate() {
                if *a == T::ZERO {
                    continue;
                }
                let ac = a.conj();
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += ac * *b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::ZERO;
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += *a * *b;
                }
                acc
            })
            .collect()
    }

    /// `selfᴴ · v`.
    pub fn adjoint_mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.rows, v.len(), "adjoint_mul_vec dimension mismatch");
        let mut out = vec![T::ZERO; self.cols];
        for (k, x) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(k)) {
                *o += a.conj() * *x;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(k)).collect(),
        }
    }

    /// `self += k · rhs`.
    pub fn axpy(&mut self, k: T, rhs: &Self) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += k * *b;
        }
    }

    /// `self += k · v vᴴ`.
    pub fn add_outer(&mut self, k: f64, v: &[T]) {
        assert!(self.is_square() && v.len() == self.rows);
        for i in 0..self.rows {
            let vi = v[i].scale(k);
            for j in 0..self.cols {
                self.data[i * self.cols + j] += vi * v[j].conj();
            }
        }
    }

    pub fn add_identity(&mut self, k: f64) {
        assert!(self.is_square());
        for i in 0..self.rows {
            self[(i, i)] += T::from_re(k);
        }
    }

    pub fn trace(&self) -> T {
        let mut t = T::ZERO;
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    /// Real part of `Tr(selfᴴ · rhs)`, the Frobenius inner product.
    pub fn inner(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a.conj() * *b).re())
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs_sq()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// `(A + Aᴴ)/2`, with exactly real diagonal.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = T::from_re(self[(i, i)].re());
            for j in (i + 1)..n {
                let v = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }

    /// `x` ᴴ · self · `x`, real part.
    pub fn quad_form(&self, x: &[T]) -> f64 {
        assert!(self.is_square() && x.len() == self.rows);
        let mut acc = T::ZERO;
        for i in 0..self.rows {
            let mut row = T::ZERO;
            for (a, b) in self.row(i).iter().zip(x) {
                row += *a * *b;
            }
            acc += x[i].conj() * row;
        }
        acc.re()
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mat<C64> {
    /// Real-symmetric embedding `[[Re A, −Im A], [Im A, Re A]]`.
    ///
    /// For Hermitian `A` and `X`, `Tr(A X) = ½ Tr(embed(A) embed(X))`.
    pub fn real_embedding(&self) -> Mat<f64> {
        let (r, c) = (self.rows, self.cols);
        let mut out = Mat::<f64>::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let z = self[(i, j)];
                out[(i, j)] = z.re;
                out[(i + r, j + c)] = z.re;
                out[(i, j + c)] = -z.im;
                out[(i + r, j)] = z.im;
            }
        }
        out
    }

    /// Inverse of [`real_embedding`](Self::real_embedding), averaging the
    /// redundant blocks (the orthogonal projection onto embedded matrices).
    pub fn from_real_embedding(m: &Mat<f64>) -> Self {
        assert!(m.rows % 2 == 0 && m.cols % 2 == 0);
        let (r, c) = (m.rows / 2, m.cols / 2);
        Mat::from_fn(r, c, |i, j| {
            C64::new(
                0.5 * (m[(i, j)] + m[(i + r, j + c)]),
                0.5 * (m[(i + r, j)] - m[(i, j + c)]),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn adjoint_products_agree() {
        let a = Mat::from_fn(3, 2, |i, j| c(i as f64 + 1.0, j as f64 - 0.5));
        let b = Mat::from_fn(3, 4, |i, j| c((i * j) as f64, 1.0 - i as f64));
        assert_eq!(a.adjoint().matmul(&b), a.adjoint_matmul(&b));
        let v = [c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 1.0)];
        assert_eq!(a.adjoint().mul_vec(&v), a.adjoint_mul_vec(&v));
    }

    #[test]
    fn embedding_preserves_trace_products() {
        let a = Mat::from_fn(3, 3, |i, j| c((i + j) as f64, i as f64 - j as f64)).hermitian_part();
        let x = Mat::from_fn(3, 3, |i, j| c(1.0 / (1 + i + j) as f64, (j as f64 - i as f64) * 0.3))
            .hermitian_part();
        let direct = a.matmul(&x).trace().re;
        let embedded = 0.5 * a.real_embedding().matmul(&x.real_embedding()).trace();
        assert!((direct - embedded).abs() < 1e-12);
        assert_eq!(Mat::from_real_embedding(&x.real_embedding()), x);
    }
}
