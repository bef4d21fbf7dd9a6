use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use super::{dot, norm, ComplexMatrix, Scalar, C64};
use crate::{Error, Result};

/// Singular values at or below this fraction of the largest are rank-deficient.
const RANK_TOL: f64 = 1e-11;
const MAX_SWEEPS: usize = 60;

/// Left singular basis `u₁…u_L` of an `L×K` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularBasis {
    /// `σ₁ ≥ … ≥ σ_L`, zero-padded past `K`.
    pub values: Vec<f64>,
    /// Unitary `L×L`; columns `rank..L` span the orthogonal complement of the
    /// column space.
    pub vectors: ComplexMatrix,
    pub rank: usize,
}

impl SingularBasis {
    pub fn complement(&self) -> ComplexMatrix {
        self.vectors.columns(self.rank..self.vectors.cols())
    }
}

/// Left singular vectors via one-sided (Hestenes) Jacobi on the columns of
/// `V`, completed to a unitary basis by pivoted Gram–Schmidt.
///
/// Requires `L ≥ K + 1` so the complement is never empty.
pub fn left_singular_basis(v: &ComplexMatrix) -> Result<SingularBasis> {
    let (l, k) = (v.rows(), v.cols());
    if l < k + 1 {
        return Err(Error::Dimension(format!(
            "left singular basis needs L >= K + 1, got L = {l}, K = {k}"
        )));
    }
    let mut cols: Vec<Vec<C64>> = (0..k).map(|j| v.col(j)).collect();
    orthogonalize_columns(&mut cols)?;

    let mut sigma: Vec<(f64, usize)> = cols.iter().enumerate().map(|(j, c)| (norm(c), j)).collect();
    sigma.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let top = sigma.first().map_or(0.0, |s| s.0);
    let rank = sigma.iter().filter(|s| s.0 > RANK_TOL * top && s.0 > 0.0).count();

    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(l);
    for &(s, j) in sigma.iter().take(rank) {
        let mut u: Vec<C64> = cols[j].iter().map(|x| x.scale(1.0 / s)).collect();
        // Restore orthogonality lost to roundoff in the rotations.
        for _ in 0..2 {
            for b in &basis {
                let p = dot(b, &u);
                for (x, y) in u.iter_mut().zip(b) {
                    *x -= p * *y;
                }
            }
        }
        let n = norm(&u);
        for x in u.iter_mut() {
            *x = x.scale(1.0 / n);
        }
        basis.push(u);
    }
    complete_basis(&mut basis, l);

    let mut values: Vec<f64> = sigma.iter().map(|s| s.0).collect();
    for s in values.iter_mut().skip(rank) {
        *s = 0.0;
    }
    values.resize(l, 0.0);
    Ok(SingularBasis {
        values,
        vectors: ComplexMatrix::from_columns(l, &basis),
        rank,
    })
}

fn orthogonalize_columns(cols: &mut [Vec<C64>]) -> Result<()> {
    let k = cols.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha = norm(&cols[p]).powi(2);
                let beta = norm(&cols[q]).powi(2);
                let gamma = dot(&cols[p], &cols[q]);
                let mag = gamma.abs();
                if mag == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma.scale(1.0 / mag);
                let theta = (beta - alpha) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ec = e.conj();
                let (jpp, jpq, jqp, jqq) = (C64::from_re(c), C64::from_re(s), ec.scale(-s), ec.scale(c));
                for i in 0..cols[p].len() {
                    let a = cols[p][i];
                    let b = cols[q][i];
                    cols[p][i] = a * jpp + b * jqp;
                    cols[q][i] = a * jpq + b * jqq;
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::EigenNotConverged { sweeps: MAX_SWEEPS })
}

/// Extend an orthonormal set to a basis of `C^dim`, each time adding the
/// coordinate vector with the largest residual after projection.
fn complete_basis(basis: &mut Vec<Vec<C64>>, dim: usize) {
    while basis.len() < dim {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for j in 0..dim {
            let mut w = alloc::vec![C64::ZERO; dim];
            w[j] = C64::ONE;
            for _ in 0..2 {
                for b in basis.iter() {
                    let p = dot(b, &w);
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= p * *y;
                    }
                }
            }
            let n = norm(&w);
            if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
                best = Some((n, w));
            }
        }
        let (n, mut w) = best.expect("dim > 0");
        for x in w.iter_mut() {
            *x = x.scale(1.0 / n);
        }
        basis.push(w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_vector() {
        let v = ComplexMatrix::from_columns(3, &[vec![C64::ONE, C64::ZERO, C64::ZERO]]);
        let sb = left_singular_basis(&v).unwrap();
        assert_eq!(sb.rank, 1);
        assert_eq!(sb.values, vec![1.0, 0.0, 0.0]);
        let w = sb.complement();
        assert_eq!(w.cols(), 2);
        for j in 0..2 {
            assert!(w[(0, j)].norm() < 1e-15);
        }
    }

    #[test]
    fn identical_columns_are_rank_one() {
        let c = vec![C64::new(1.0, 1.0), C64::new(0.5, -2.0), C64::new(0.0, 3.0), C64::new(-1.0, 0.0)];
        let v = ComplexMatrix::from_columns(4, &[c.clone(), c]);
        let sb = left_singular_basis(&v).unwrap();
        assert_eq!(sb.rank, 1);
        assert_eq!(sb.complement().cols(), 3);
        let g = sb.vectors.adjoint_matmul(&sb.vectors);
        assert!(g.sub(&ComplexMatrix::identity(4)).max_abs() < 1e-14);
    }

    #[test]
    fn too_few_rows() {
        let v = ComplexMatrix::zeros(2, 2);
        assert!(matches!(left_singular_basis(&v), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let sb = left_singular_basis(&ComplexMatrix::zeros(3, 1)).unwrap();
        assert_eq!(sb.rank, 0);
        assert_eq!(sb.complement().cols(), 3);
    }
}
