mod common;

use common::*;
use wavesec_core::kernel::{
    dot, generalized_eig, generalized_eig_extremes, hermitian_eig, left_singular_basis, norm, ComplexMatrix,
    HermitianMatrix, C64,
};
use wavesec_core::rng::substream;

/// Number of eigenvalues of `A` below `x`, from the signs of the pivots of an
/// unpivoted `LDLᴴ` of `A − xI` (Sylvester's law of inertia; the product of
/// the pivots is `det(A − xI)`).
fn count_below(a: &HermitianMatrix, x: f64) -> usize {
    let n = a.dim();
    let m = a.as_matrix();
    let mut work: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] - if i == j { C64::new(x, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let mut d = work[k][k].re;
        if d == 0.0 {
            d = -1e-300;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in (k + 1)..n {
            let f = work[i][k] / d;
            for j in (k + 1)..n {
                let sub = f * work[k][j];
                work[i][j] -= sub;
            }
        }
    }
    negatives
}

/// k-th smallest eigenvalue by bisection on the inertia count.
fn kth_root(a: &HermitianMatrix, k: usize) -> f64 {
    let bound = a.frobenius_norm() + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(a, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn spectrum_matches_characteristic_polynomial_roots() {
    for seed in 0..10 {
        let mut rng = substream(100, seed);
        let a = random_hermitian(&mut rng, 8);
        let eig = hermitian_eig(&a).unwrap();
        for i in 0..8 {
            let oracle = kth_root(&a, 7 - i);
            assert!(
                (eig.values[i] - oracle).abs() <= 1e-8,
                "seed {seed} index {i}: {} vs {oracle}",
                eig.values[i]
            );
        }
    }
}

#[test]
fn identity_and_diagonal() {
    let eig = hermitian_eig(&HermitianMatrix::identity(3)).unwrap();
    assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
    let eig = hermitian_eig(&HermitianMatrix::from_real_diagonal(&[1.0, 4.0])).unwrap();
    assert_eq!(eig.values, vec![4.0, 1.0]);
    assert_eq!(eig.vector(0), vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
}

#[test]
fn eigenpairs_satisfy_definition() {
    let mut rng = substream(101, 0);
    for _ in 0..20 {
        let a = random_hermitian(&mut rng, 12);
        let eig = hermitian_eig(&a).unwrap();
        let scale = a.frobenius_norm();
        for i in 0..12 {
            let v = eig.vector(i);
            let av = a.mul_vec(&v);
            let r: f64 = av.iter().zip(&v).map(|(x, y)| (x - y * eig.values[i]).norm_sqr()).sum::<f64>().sqrt();
            assert!(r <= 1e-9 * scale);
            for j in 0..12 {
                let d = dot(&eig.vector(j), &v);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - C64::new(expect, 0.0)).norm() <= 1e-9);
            }
        }
    }
}

#[test]
fn generalized_extremes_bound_random_quotients() {
    let mut rng = substream(102, 0);
    let a = random_hpd(&mut rng, 6);
    let b = random_hpd(&mut rng, 6);
    let ext = generalized_eig_extremes(&a, &b).unwrap();
    let scale = a.frobenius_norm() + b.frobenius_norm();
    for pair in [&ext.min, &ext.max] {
        assert!((norm(&pair.vector) - 1.0).abs() < 1e-12);
        let ap = a.mul_vec(&pair.vector);
        let bp = b.mul_vec(&pair.vector);
        let r: f64 = ap.iter().zip(&bp).map(|(x, y)| (x - y * pair.value).norm_sqr()).sum::<f64>().sqrt();
        assert!(r <= 1e-9 * scale);
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for _ in 0..100_000 {
        let p = random_unit(&mut rng, 6);
        let q = a.quad_form(&p) / b.quad_form(&p);
        lo = lo.min(q);
        hi = hi.max(q);
    }
    assert!(ext.min.value <= lo);
    assert!(ext.max.value >= hi);
}

#[test]
fn generalized_identical_and_diagonal() {
    let mut rng = substream(103, 0);
    let b = random_hpd(&mut rng, 4);
    let ext = generalized_eig_extremes(&b, &b).unwrap();
    assert!((ext.min.value - 1.0).abs() < 1e-12 && (ext.max.value - 1.0).abs() < 1e-12);
    let ext = generalized_eig_extremes(
        &HermitianMatrix::from_real_diagonal(&[1.0, 2.0]),
        &HermitianMatrix::from_real_diagonal(&[2.0, 1.0]),
    )
    .unwrap();
    assert!((ext.min.value - 0.5).abs() < 1e-15 && (ext.max.value - 2.0).abs() < 1e-15);
    assert!((ext.min.vector[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn generalized_rejects_indefinite_b() {
    let a = HermitianMatrix::identity(2);
    let b = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
    assert_eq!(generalized_eig(&a, &b).unwrap_err().kind(), "not-positive-definite");
}

#[test]
fn singular_basis_complement_is_orthogonal() {
    let mut rng = substream(104, 0);
    let v = random_matrix(&mut rng, 8, 3);
    let sb = left_singular_basis(&v).unwrap();
    assert_eq!(sb.rank, 3);
    let w = sb.complement();
    assert_eq!(w.cols(), 5);
    assert!(v.adjoint_matmul(&w).max_abs() <= 1e-9);
    let gram = sb.vectors.adjoint_matmul(&sb.vectors);
    assert!(gram.sub(&ComplexMatrix::identity(8)).max_abs() <= 1e-12);
    for i in 0..8 {
        let proj = v.adjoint_mul_vec(&sb.vectors.col(i));
        assert!((norm(&proj) - sb.values[i]).abs() <= 1e-9);
    }
    for pair in sb.values.windows(2) {
        assert!(pair[0] >= pair[1]);
    }
}
