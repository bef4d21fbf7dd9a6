//! Dense linear algebra for the small (dimension ≤ ~64) Hermitian problems
//! that every design routine reduces to.
//!
//! Everything is generic over [`Scalar`] so the same Jacobi and Cholesky code
//! serves both the complex design problems and the real-symmetric embedding
//! used by the SDP solver.

mod cholesky;
mod eigen;
mod hermitian;
mod matrix;
mod svd;

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

pub use cholesky::Cholesky;
pub use eigen::{
    generalized_eig, generalized_eig_extremes, hermitian_eig, symmetric_eig, EigenPair,
    EigenPairSet, GeneralizedExtremes,
};
pub use hermitian::HermitianMatrix;
pub use matrix::Mat;
pub use svd::{left_singular_basis, SingularBasis};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = Mat<C64>;
pub type RealMatrix = Mat<f64>;

/// Field element the kernel can work over: `f64` or `Complex<f64>`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    const ZERO: Self;
    const ONE: Self;

    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn abs_sq(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn scale(self, k: f64) -> Self;
    fn is_finite(self) -> bool;

    fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self * self
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
    #[inline]
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
}

impl Scalar for C64 {
    const ZERO: Self = Complex::new(0.0, 0.0);
    const ONE: Self = Complex::new(1.0, 0.0);

    #[inline]
    fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        Complex::new(x, 0.0)
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        Complex::new(self.re * k, self.im * k)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Inner product `aᴴb`.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

pub fn norm<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.abs_sq()).sum::<f64>().sqrt()
}

/// Scale `v` to unit Euclidean norm. Returns the original norm.
pub fn normalize<T: Scalar>(v: &mut [T]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        let inv = 1.0 / n;
        for x in v.iter_mut() {
            *x = x.scale(inv);
        }
    }
    n
}

/// Rotate `v` so its largest-magnitude entry is real and positive.
///
/// Ties go to the lowest index.
pub fn normalize_phase(v: &mut [C64]) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, x) in v.iter().enumerate() {
        let m = x.norm_sqr();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let pivot = v[best];
    let phase = pivot.conj() / pivot.norm();
    for x in v.iter_mut() {
        *x *= phase;
    }
    v[best] = C64::new(v[best].re, 0.0);
}
