use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use super::{Mat, Scalar};
use crate::{Error, Result};

/// Pivots below this fraction of `Tr(A)/n` are treated as loss of definiteness.
pub(crate) const PIVOT_TOL: f64 = 1e-12;

/// `A = L Lᴴ` with `L` lower triangular and positive real diagonal.
#[derive(Clone, Debug)]
pub struct Cholesky<T> {
    l: Mat<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factor a Hermitian (or real symmetric) matrix. Only the lower triangle
    /// is read.
    pub fn new(a: &Mat<T>) -> Result<Self> {
        Self::with_pivot_tolerance(a, PIVOT_TOL)
    }

    /// As [`new`](Self::new) with a caller-chosen relative pivot floor.
    /// Interior-point iterates need `0.0`: they are positive definite but can
    /// be extremely ill-conditioned near the optimum.
    pub fn with_pivot_tolerance(a: &Mat<T>, rel_tol: f64) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension("Cholesky needs a square matrix".into()));
        }
        let n = a.rows();
        let trace: f64 = (0..n).map(|i| a[(i, i)].re()).sum();
        let threshold = rel_tol * trace.abs().max(f64::MIN_POSITIVE) / n.max(1) as f64;
        let mut l = Mat::<T>::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re();
            for k in 0..j {
                d -= l[(j, k)].abs_sq();
            }
            if !(d > threshold) || trace <= 0.0 {
                return Err(Error::NotPositiveDefinite {
                    pivot: d,
                    threshold,
                });
            }
            let ljj = d.sqrt();
            l[(j, j)] = T::from_re(ljj);
            let inv = 1.0 / ljj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s.scale(inv);
            }
        }
        Ok(Cholesky { l })
    }

    pub fn factor(&self) -> &Mat<T> {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solve `L y = b` in place.
    pub fn solve_lower_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[(i, k)] * b[k];
            }
            b[i] = s.scale(1.0 / self.l[(i, i)].re());
        }
    }

    /// Solve `Lᴴ x = y` in place.
    pub fn solve_upper_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[(k, i)].conj() * b[k];
            }
            b[i] = s.scale(1.0 / self.l[(i, i)].re());
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let mut x = b.to_vec();
        self.solve_lower_in_place(&mut x);
        self.solve_upper_in_place(&mut x);
        x
    }

    /// `L⁻¹ B`, column by column.
    pub fn solve_lower_mat(&self, b: &Mat<T>) -> Mat<T> {
        assert_eq!(b.rows(), self.dim());
        let mut out = b.clone();
        for j in 0..b.cols() {
            let mut c = b.col(j);
            self.solve_lower_in_place(&mut c);
            out.set_col(j, &c);
        }
        out
    }

    /// `L⁻ᴴ B`, column by column.
    pub fn solve_upper_mat(&self, b: &Mat<T>) -> Mat<T> {
        assert_eq!(b.rows(), self.dim());
        let mut out = b.clone();
        for j in 0..b.cols() {
            let mut c = b.col(j);
            self.solve_upper_in_place(&mut c);
            out.set_col(j, &c);
        }
        out
    }

    /// `A⁻¹ B`.
    pub fn solve_mat(&self, b: &Mat<T>) -> Mat<T> {
        self.solve_upper_mat(&self.solve_lower_mat(b))
    }

    /// `L⁻¹ A L⁻ᴴ` for a Hermitian `A`, returned exactly Hermitian.
    pub fn whiten(&self, a: &Mat<T>) -> Mat<T> {
        let left = self.solve_lower_mat(a);
        // (L⁻¹ (L⁻¹ A)ᴴ) = L⁻¹ Aᴴ L⁻ᴴ = L⁻¹ A L⁻ᴴ
        self.solve_lower_mat(&left.adjoint()).hermitian_part()
    }

    /// `log det A`.
    pub fn log_det(&self) -> f64 {
        (0..self.dim()).map(|i| 2.0 * self.l[(i, i)].re().ln()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::C64;
    use alloc::vec;

    #[test]
    fn factor_reconstructs() {
        let a = Mat::from_row_major(
            2,
            2,
            vec![C64::new(4.0, 0.0), C64::new(1.0, 2.0), C64::new(1.0, -2.0), C64::new(6.0, 0.0)],
        );
        let ch = Cholesky::new(&a).unwrap();
        let l = ch.factor();
        let back = l.matmul(&l.adjoint());
        assert!(back.sub(&a).max_abs() < 1e-14);
        let b = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let x = ch.solve(&b);
        let ax = a.mul_vec(&x);
        assert!((ax[0] - b[0]).norm() < 1e-14 && (ax[1] - b[1]).norm() < 1e-14);
    }

    #[test]
    fn rejects_singular() {
        let a = Mat::<f64>::from_row_major(2, 2, vec![1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(Cholesky::new(&a), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn rejects_indefinite() {
        let a = Mat::<f64>::diag(&[1.0, -1.0]);
        assert!(Cholesky::new(&a).is_err());
    }
}
