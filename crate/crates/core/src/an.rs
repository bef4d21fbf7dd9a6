//! Designs for an eavesdropper of unknown CSI: minimum-energy waveform plus
//! isotropic artificial noise confined to directions Bob's max-SINR filter
//! cannot see.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;
use rand::Rng;

use crate::channel::EffectiveQ;
use crate::kernel::{hermitian_eig, left_singular_basis, ComplexMatrix, HermitianMatrix, Scalar, C64};
use crate::p2p::{DesignBranch, WaveformDesign};
use crate::rng::complex_gaussian;
use crate::{Error, Result};

/// `R_w = E_AN/(L−r) · W Wᴴ`, with `W` an orthonormal basis of the orthogonal
/// complement of the blocked directions and `r` their rank.
#[derive(Clone, Debug, PartialEq)]
pub struct AnCovariance {
    rw: HermitianMatrix,
    budget: f64,
    blocked: Vec<Vec<C64>>,
    basis: ComplexMatrix,
    rank: usize,
}

impl AnCovariance {
    /// Covariance matrix `R_w`.
    pub fn matrix(&self) -> &HermitianMatrix {
        &self.rw
    }

    /// `E_AN = Tr R_w`.
    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn blocked(&self) -> &[Vec<C64>] {
        &self.blocked
    }

    /// Orthonormal `W`, `L×(L−r)`.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Rank of the blocked set.
    pub fn blocked_rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.rw.dim()
    }

    /// Common nonzero eigenvalue `E_AN/(L−r)`.
    pub fn per_dimension_energy(&self) -> f64 {
        self.budget / self.basis.cols() as f64
    }

    /// One draw `w = √(E_AN/(L−r)) W g`, `g ~ CN(0, I)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        let k = self.basis.cols();
        let g: Vec<C64> = (0..k).map(|_| complex_gaussian(rng, 1.0)).collect();
        let amp = self.per_dimension_energy().sqrt();
        self.basis.mul_vec(&g).into_iter().map(|x| x.scale(amp)).collect()
    }
}

/// Isotropic AN in the orthogonal complement of `blocking`, each vector of
/// length `L`.
pub fn an_covariance(blocking: &[Vec<C64>], e_an: f64, chips: usize) -> Result<AnCovariance> {
    if !(e_an >= 0.0) || !e_an.is_finite() {
        return Err(Error::InvalidParameter(format!("AN budget must be non-negative, got {e_an}")));
    }
    if let Some(v) = blocking.iter().find(|v| v.len() != chips) {
        return Err(Error::Dimension(format!(
            "blocking vector has length {}, expected {chips}",
            v.len()
        )));
    }
    let v = ComplexMatrix::from_columns(chips, blocking);
    let sb = left_singular_basis(&v)?;
    let basis = sb.complement();
    let scale = e_an / basis.cols() as f64;
    let rw = HermitianMatrix::gram(&basis.adjoint()).scaled(scale);
    Ok(AnCovariance {
        rw,
        budget: e_an,
        blocked: blocking.to_vec(),
        basis,
        rank: sb.rank,
    })
}

/// Draw one AN vector.
pub fn sample_an<R: Rng + ?Sized>(rw: &AnCovariance, rng: &mut R) -> Vec<C64> {
    rw.sample(rng)
}

/// Waveform needing the least energy to give Bob SINR `γ`: the top
/// eigenvector `q₁` of `Q_b` with `E_min = γ/λ₁`.
pub fn min_energy_design(q_b: &EffectiveQ, gamma: f64, e_max: f64) -> Result<WaveformDesign> {
    if !(gamma > 0.0) || !(e_max > 0.0) || !gamma.is_finite() || !e_max.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma and E_max must be finite and positive, got {gamma}, {e_max}"
        )));
    }
    let top = top_eigenvector(q_b.matrix())?;
    let energy = gamma / top.0;
    if energy > e_max {
        return Err(Error::NoTransmit(format!(
            "minimum energy {energy:.6e} exceeds E_max = {e_max:.6e}"
        )));
    }
    Ok(WaveformDesign {
        waveform: top.1,
        energy,
        branch: DesignBranch::MinEnergy,
    })
}

/// Top eigenpair. Inside a degenerate top eigenspace the lowest-index
/// phase-normalised vector is taken, which is what the sorted Jacobi output
/// yields deterministically.
fn top_eigenvector(q: &HermitianMatrix) -> Result<(f64, Vec<C64>)> {
    let top = hermitian_eig(q)?.top();
    Ok((top.value, top.vector))
}

/// Single-receiver AN design.
#[derive(Clone, Debug, PartialEq)]
pub struct AnDesign {
    pub design: WaveformDesign,
    pub an: AnCovariance,
}

impl AnDesign {
    /// `E_AN / E_max`.
    pub fn an_fraction(&self, e_max: f64) -> f64 {
        self.an.budget() / e_max
    }
}

/// Minimum-energy waveform plus AN carrying the rest of the budget,
/// blocked along `Q_b q₁`.
pub fn an_pipeline_single(q_b: &EffectiveQ, gamma: f64, e_max: f64) -> Result<AnDesign> {
    let design = min_energy_design(q_b, gamma, e_max)?;
    let v = q_b.matrix().mul_vec(&design.waveform);
    let an = an_covariance(&[v], (e_max - design.energy).max(0.0), q_b.dim())?;
    Ok(AnDesign { design, an })
}

/// AN for a given multicast waveform: blocked along every `Q_{b,k} s`.
pub fn an_pipeline_multicast(q_bs: &[EffectiveQ], design: WaveformDesign, e_max: f64) -> Result<AnDesign> {
    let l = design.waveform.len();
    if q_bs.iter().any(|q| q.dim() != l) {
        return Err(Error::Dimension("receiver Q dimensions do not match the waveform".into()));
    }
    let blocking: Vec<Vec<C64>> = q_bs.iter().map(|q| q.matrix().mul_vec(&design.waveform)).collect();
    let an = an_covariance(&blocking, (e_max - design.energy).max(0.0), l)?;
    Ok(AnDesign { design, an })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(values: &[f64]) -> EffectiveQ {
        EffectiveQ::from_hermitian(HermitianMatrix::from_real_diagonal(values)).unwrap()
    }

    fn e(i: usize, n: usize) -> Vec<C64> {
        let mut v = vec![C64::ZERO; n];
        v[i] = C64::ONE;
        v
    }

    #[test]
    fn two_dim_complement() {
        let an = an_covariance(&[e(0, 2)], 5.0, 2).unwrap();
        let expect = HermitianMatrix::from_real_diagonal(&[0.0, 5.0]);
        assert!(an.matrix().as_matrix().sub(expect.as_matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn empty_budget() {
        let an = an_covariance(&[e(0, 3)], 0.0, 3).unwrap();
        assert_eq!(an.matrix().as_matrix().max_abs(), 0.0);
        let w = an.sample(&mut crate::rng::substream(0, 0));
        assert!(w.iter().all(|x| *x == C64::ZERO));
    }

    #[test]
    fn min_energy_diagonal() {
        let d = min_energy_design(&q(&[4.0, 1.0]), 8.0, 100.0).unwrap();
        assert!((d.energy - 2.0).abs() < 1e-14);
        assert!((d.waveform[0] - C64::ONE).norm() < 1e-14);
        let iso = min_energy_design(&q(&[1.0, 1.0, 1.0]), 3.0, 100.0).unwrap();
        assert!((iso.energy - 3.0).abs() < 1e-14);
        assert_eq!(min_energy_design(&q(&[4.0, 1.0]), 8.0, 1.0).unwrap_err().kind(), "no-transmit");
    }

    #[test]
    fn single_pipeline_diagonal() {
        let a = an_pipeline_single(&q(&[4.0, 1.0]), 8.0, 10.0).unwrap();
        assert!((a.an.budget() - 8.0).abs() < 1e-14);
        let expect = HermitianMatrix::from_real_diagonal(&[0.0, 8.0]);
        assert!(a.an.matrix().as_matrix().sub(expect.as_matrix()).max_abs() < 1e-14);
        let none = an_pipeline_single(&q(&[4.0, 1.0]), 8.0, 2.0).unwrap();
        assert_eq!(none.an.budget(), 0.0);
    }
}
