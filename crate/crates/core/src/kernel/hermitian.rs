use alloc::format;

use super::{Cholesky, ComplexMatrix, Scalar, C64};
use crate::{Error, Result};

/// Relative tolerance on `A − Aᴴ` accepted by [`HermitianMatrix::new`].
pub(crate) const HERMITIAN_TOL: f64 = 1e-12;

/// A complex matrix known to satisfy `A = Aᴴ` (stored exactly Hermitian).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Validate and store `m`. Asymmetry up to `1e-12` relative to the largest
    /// entry is accepted and averaged away.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        let n = m.rows();
        let scale = m.max_abs();
        let mut asym: f64 = 0.0;
        for i in 0..n {
            asym = asym.max(m[(i, i)].im.abs());
            for j in (i + 1)..n {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).abs());
            }
        }
        if asym > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian {
                asymmetry: asym,
                scale,
            });
        }
        Ok(HermitianMatrix(m.hermitian_part()))
    }

    /// Hermitian part `(m + mᴴ)/2` of any square matrix, no validation.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        HermitianMatrix(m.hermitian_part())
    }

    /// Real diagonal matrix.
    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let d: alloc::vec::Vec<C64> = values.iter().map(|v| C64::new(*v, 0.0)).collect();
        HermitianMatrix(ComplexMatrix::diag(&d))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(n, n))
    }

    /// `Gᴴ G`, which is Hermitian by construction.
    pub fn gram(g: &ComplexMatrix) -> Self {
        HermitianMatrix(g.adjoint_matmul(g).hermitian_part())
    }

    /// `Σ wᵢ vᵢ vᵢᴴ + shift · I`.
    pub fn from_outer_products<'a>(
        dim: usize,
        shift: f64,
        terms: impl IntoIterator<Item = (f64, &'a [C64])>,
    ) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m.add_identity(shift);
        for (w, v) in terms {
            m.add_outer(w, v);
        }
        HermitianMatrix(m.hermitian_part())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `xᴴ A x` (real because `A` is Hermitian).
    pub fn quad_form(&self, x: &[C64]) -> f64 {
        self.0.quad_form(x)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    /// `Tr(A B)` for Hermitian `A`, `B` (real).
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        // Tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij)
        self.0.inner(&other.0)
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(self.0.add(&other.0).hermitian_part())
    }

    pub fn scaled(&self, k: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scaled(k))
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: f64, other: &HermitianMatrix, b: f64) -> HermitianMatrix {
        let mut m = self.0.scaled(a);
        m.axpy(C64::new(b, 0.0), &other.0);
        HermitianMatrix(m)
    }

    pub fn shifted(&self, k: f64) -> HermitianMatrix {
        let mut m = self.0.clone();
        m.add_identity(k);
        HermitianMatrix(m)
    }

    /// `Bᴴ A B`.
    pub fn congruence(&self, b: &ComplexMatrix) -> HermitianMatrix {
        HermitianMatrix(b.adjoint_matmul(&self.0.matmul(b)).hermitian_part())
    }

    pub fn cholesky(&self) -> Result<Cholesky<C64>> {
        Cholesky::new(&self.0)
    }

    pub fn mul_vec(&self, v: &[C64]) -> alloc::vec::Vec<C64> {
        self.0.mul_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            alloc::vec![C64::ONE, C64::new(1.0, 1.0), C64::new(1.0, 1.0), C64::ONE],
        );
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_imaginary_diagonal() {
        let m = ComplexMatrix::diag(&[C64::new(1.0, 1e-6), C64::ONE]);
        assert!(HermitianMatrix::new(m).is_err());
    }

    #[test]
    fn accepts_roundoff_and_symmetrizes() {
        let m = ComplexMatrix::from_row_major(
            2,
            2,
            alloc::vec![
                C64::new(2.0, 0.0),
                C64::new(1.0, 0.5),
                C64::new(1.0, -0.5 + 1e-14),
                C64::new(3.0, 1e-15)
            ],
        );
        let h = HermitianMatrix::new(m).unwrap();
        let a = h.as_matrix();
        assert_eq!(a[(0, 1)], a[(1, 0)].conj());
        assert_eq!(a[(1, 1)].im, 0.0);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(
            HermitianMatrix::new(ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }
}
