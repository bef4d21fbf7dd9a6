//! Secure waveform design for single-antenna multipath wiretap channels.
//!
//! The crate is `no_std` (it needs `alloc`) and contains the numerical core:
//!
//! - [`kernel`]: small dense complex-Hermitian linear algebra (Jacobi
//!   eigensolver, Cholesky, generalized eigenproblems, SVD complements).
//! - [`channel`]: multipath channel draws, banded convolution matrices,
//!   disturbance covariances, effective `Q` matrices and chip-level
//!   received-signal simulation.
//! - [`p2p`]: known-eavesdropper design (generalized eigen-waveform and the
//!   KKT bisection branch).
//! - [`an`]: minimum-energy waveform and artificial-noise covariances.
//! - [`sdr`]: semidefinite relaxation for secure multicasting, including a
//!   dense primal-dual interior-point SDP solver and Gaussian randomization.
//!
//! IO, configuration files and the Monte Carlo driver live in the `wavesec`
//! companion crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod an;
pub mod channel;
mod error;
pub mod kernel;
pub mod p2p;
pub mod rng;
pub mod sdr;

pub use error::{Error, Result};
pub use kernel::{ComplexMatrix, HermitianMatrix, C64};

/// Linear SINR to decibels.
pub fn to_db(linear: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    10.0 * linear.log10()
}

/// Decibels to linear SINR.
pub fn from_db(db: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    10.0.powf(db / 10.0)
}
