use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use super::{normalize, normalize_phase, Cholesky, ComplexMatrix, HermitianMatrix, Mat, Scalar, C64};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for Hermitian / real-symmetric matrices.
///
/// Returns `(values, vectors)` unsorted; column `i` of `vectors` pairs with
/// `values[i]`.
pub(crate) fn jacobi<T: Scalar>(a: &Mat<T>) -> Result<(Vec<f64>, Mat<T>)> {
    let n = a.rows();
    let mut a = a.hermitian_part();
    let mut v = Mat::<T>::identity(n);
    if n <= 1 {
        return Ok(((0..n).map(|i| a[(i, i)].re()).collect(), v));
    }
    let total = a.frobenius_norm();
    if total == 0.0 {
        return Ok((alloc::vec![0.0; n], v));
    }
    let tiny = f64::EPSILON * f64::EPSILON * total * total;

    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].abs_sq();
            }
        }
        if off <= tiny {
            return Ok(((0..n).map(|i| a[(i, i)].re()).collect(), v));
        }
        // Early sweeps skip rotations that cannot matter yet.
        let threshold = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag_sq = apq.abs_sq();
                if mag_sq == 0.0 || mag_sq < threshold {
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                let mag = mag_sq.sqrt();
                if sweep > 3
                    && mag * 1e18 < app.abs()
                    && mag * 1e18 < aqq.abs()
                {
                    a[(p, q)] = T::ZERO;
                    a[(q, p)] = T::ZERO;
                    continue;
                }
                // Unit-modulus phase e with apq = |apq| e.
                let e = apq.scale(1.0 / mag);
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, ē) · [[c, s], [−s, c]] on (p, q):
                // J_pp = c, J_pq = s, J_qp = −s ē, J_qq = c ē.
                let ec = e.conj();
                let jpp = T::from_re(c);
                let jpq = T::from_re(s);
                let jqp = ec.scale(-s);
                let jqq = ec.scale(c);
                // A ← A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                // A ← Jᴴ A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = T::ZERO;
                a[(q, p)] = T::ZERO;
                a[(p, p)] = T::from_re(a[(p, p)].re());
                a[(q, q)] = T::from_re(a[(q, q)].re());
                // V ← V J
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    Err(Error::EigenNotConverged { sweeps: MAX_SWEEPS })
}

/// Eigenvalues sorted descending with their unit-norm eigenvectors (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPairSet {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenPairSet {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.col(i)
    }

    /// Largest eigenvalue with its vector.
    pub fn top(&self) -> EigenPair {
        EigenPair {
            value: self.values[0],
            vector: self.vector(0),
        }
    }

    /// Smallest eigenvalue with its vector.
    pub fn bottom(&self) -> EigenPair {
        let i = self.values.len() - 1;
        EigenPair {
            value: self.values[i],
            vector: self.vector(i),
        }
    }

    /// `Σ λᵢ vᵢ vᵢᴴ`.
    pub fn reconstruct(&self) -> HermitianMatrix {
        let n = self.vectors.rows();
        let cols: Vec<Vec<C64>> = (0..self.len()).map(|i| self.vector(i)).collect();
        HermitianMatrix::from_outer_products(
            n,
            0.0,
            self.values.iter().copied().zip(cols.iter().map(|c| c.as_slice())),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<C64>,
}

fn sorted_descending<T: Scalar>(values: Vec<f64>, vectors: Mat<T>) -> (Vec<f64>, Mat<T>) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let sorted_vals = order.iter().map(|&i| values[i]).collect();
    let sorted_vecs = Mat::from_fn(vectors.rows(), n, |r, c| vectors[(r, order[c])]);
    (sorted_vals, sorted_vecs)
}

/// Full spectrum of a Hermitian matrix, descending, with phase-normalised
/// eigenvectors (largest-magnitude entry real positive).
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<EigenPairSet> {
    let (values, vectors) = jacobi(a.as_matrix())?;
    let (values, mut vectors) = sorted_descending(values, vectors);
    for j in 0..vectors.cols() {
        let mut c = vectors.col(j);
        normalize(&mut c);
        normalize_phase(&mut c);
        vectors.set_col(j, &c);
    }
    Ok(EigenPairSet { values, vectors })
}

/// Full spectrum of a real symmetric matrix, descending.
pub fn symmetric_eig(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let (values, vectors) = jacobi(a)?;
    Ok(sorted_descending(values, vectors))
}

/// Generalized problem `A p = λ B p` with `B` positive definite, solved by
/// Cholesky reduction `B = L Lᴴ` and a standard eigendecomposition of
/// `L⁻¹ A L⁻ᴴ`.
///
/// Values are descending; vectors are unit Euclidean norm and
/// phase-normalised (they are `B`-orthogonal, not orthonormal).
pub fn generalized_eig(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<EigenPairSet> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(alloc::format!(
            "generalized eigenproblem with A {0}x{0} and B {1}x{1}",
            a.dim(),
            b.dim()
        )));
    }
    let chol = b.cholesky()?;
    generalized_eig_with(a, &chol)
}

pub(crate) fn generalized_eig_with(
    a: &HermitianMatrix,
    chol: &Cholesky<C64>,
) -> Result<EigenPairSet> {
    let reduced = HermitianMatrix::from_hermitian_part(&chol.whiten(a.as_matrix()));
    let inner = hermitian_eig(&reduced)?;
    let back = chol.solve_upper_mat(&inner.vectors);
    let mut vectors = back;
    for j in 0..vectors.cols() {
        let mut c = vectors.col(j);
        normalize(&mut c);
        normalize_phase(&mut c);
        vectors.set_col(j, &c);
    }
    Ok(EigenPairSet {
        values: inner.values,
        vectors,
    })
}

/// Extreme generalized eigenpairs of `(A, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedExtremes {
    pub min: EigenPair,
    pub max: EigenPair,
}

pub fn generalized_eig_extremes(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<GeneralizedExtremes> {
    let set = generalized_eig(a, b)?;
    Ok(GeneralizedExtremes {
        min: set.bottom(),
        max: set.top(),
    })
}
