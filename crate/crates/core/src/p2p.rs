//! Known-eavesdropper design for a single intended receiver.
//!
//! Minimise Eve's output SINR `E sᴴQ_e s` subject to `E sᴴQ_b s ≥ γ`,
//! `E ≤ E_max` and `‖s‖ = 1`. At the optimum Bob's constraint is active, so
//! `E = γ / sᴴQ_b s` and the objective becomes `γ · sᴴQ_e s / sᴴQ_b s`.
//!
//! - If the minimum generalized eigenvector `p_L` of `(Q_e, Q_b)` needs no
//!   more than `E_max`, it is optimal.
//! - Otherwise the energy cap binds as well, and the waveform solves
//!   `(Q_e + μI) s = β Q_b s`. It is found by bisection on
//!   `μ̃ = μ/(1+μ) ∈ [0, 1)`, along which `sᴴQ_b s` increases monotonically.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use crate::channel::EffectiveQ;
use crate::kernel::{hermitian_eig, normalize, normalize_phase, Cholesky, ComplexMatrix, HermitianMatrix, C64};
use crate::{Error, Result};

/// Default absolute tolerance on `|sᴴQ_b s − γ/E_max|`.
pub const DEFAULT_EPSILON: f64 = 1e-8;
/// Largest `μ̃` evaluated by the bisection.
pub const MU_TILDE_MAX: f64 = 1.0 - 1e-9;
pub const MAX_BISECTION_ITERATIONS: usize = 200;
/// Eigenvalues closer than this (relative to the spectral radius) are treated
/// as one degenerate eigenvalue.
const TIE_TOL: f64 = 1e-10;

/// How a waveform design was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DesignBranch {
    /// Minimum generalized eigenvector, energy cap inactive.
    Eigen,
    /// KKT bisection, energy cap active.
    Bisection,
    /// Top eigenvector of `Q_b` at minimum energy.
    MinEnergy,
    /// Rank-one SDP solution.
    SdrRankOne,
    /// Best Gaussian-randomization sample.
    SdrRandomized,
}

impl DesignBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignBranch::Eigen => "eigen",
            DesignBranch::Bisection => "bisection",
            DesignBranch::MinEnergy => "min-energy",
            DesignBranch::SdrRankOne => "sdr-rank-one",
            DesignBranch::SdrRandomized => "sdr-randomized",
        }
    }
}

/// Unit-norm waveform `s` and energy per bit `E`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveformDesign {
    pub waveform: Vec<C64>,
    pub energy: f64,
    pub branch: DesignBranch,
}

impl WaveformDesign {
    /// `E sᴴ Q s`.
    pub fn sinr(&self, q: &EffectiveQ) -> f64 {
        q.sinr(&self.waveform, self.energy)
    }

    /// `E sᴴ A s` for an arbitrary Hermitian `A`.
    pub fn quad(&self, a: &HermitianMatrix) -> f64 {
        self.energy * a.quad_form(&self.waveform)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct P2pProblem {
    pub q_b: EffectiveQ,
    pub q_e: EffectiveQ,
    /// Linear SINR target.
    pub gamma: f64,
    pub e_max: f64,
    pub epsilon: f64,
}

impl P2pProblem {
    pub fn new(q_b: EffectiveQ, q_e: EffectiveQ, gamma: f64, e_max: f64) -> Result<Self> {
        let p = P2pProblem {
            q_b,
            q_e,
            gamma,
            e_max,
            epsilon: DEFAULT_EPSILON,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        self.epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_b.dim() != self.q_e.dim() {
            return Err(Error::Dimension(format!(
                "Q_b is {0}x{0} but Q_e is {1}x{1}",
                self.q_b.dim(),
                self.q_e.dim()
            )));
        }
        for (name, v) in [("gamma", self.gamma), ("E_max", self.e_max), ("epsilon", self.epsilon)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }

    /// `γ / E_max`, the smallest admissible `sᴴQ_b s`.
    pub fn threshold(&self) -> f64 {
        self.gamma / self.e_max
    }

    /// Eve's SINR for a design.
    pub fn objective(&self, d: &WaveformDesign) -> f64 {
        d.sinr(&self.q_e)
    }
}

/// `λ_max(Q_b) ≥ γ/E_max`.
pub fn check_feasibility(p: &P2pProblem) -> Result<bool> {
    let top = hermitian_eig(p.q_b.matrix())?.values[0];
    Ok(top >= p.threshold())
}

/// Outcome of the eigen branch.
#[derive(Clone, Debug, PartialEq)]
pub enum EigenOutcome {
    /// `p_L` meets Bob's target within the energy cap.
    Design(WaveformDesign),
    /// `p_Lᴴ Q_b p_L < γ/E_max`: the cap binds and bisection is required.
    NeedsBisection { waveform: Vec<C64>, qb_gain: f64 },
}

/// The monotone map `μ̃ ↦ q_L(μ̃)` with `q_L(μ̃)` the minimum generalized
/// eigenvector of `((1−μ̃)Q_e + μ̃I, (1−μ̃)Q_b)`.
///
/// With `Q_b = L Lᴴ` the pencil reduces to the Hermitian matrix
/// `(1−μ̃) L⁻¹Q_eL⁻ᴴ + μ̃ L⁻¹L⁻ᴴ`, which stays bounded as `μ̃ → 1`.
#[derive(Clone, Debug)]
pub struct BisectionMap {
    chol: Cholesky<C64>,
    whitened_e: ComplexMatrix,
    whitened_i: ComplexMatrix,
    q_b: HermitianMatrix,
    q_e: HermitianMatrix,
}

/// One evaluation of [`BisectionMap`].
#[derive(Clone, Debug, PartialEq)]
pub struct BisectionPoint {
    pub mu_tilde: f64,
    /// Unit-norm, phase-normalised `q_L(μ̃)`.
    pub waveform: Vec<C64>,
    /// `sᴴ Q_b s`.
    pub qb_gain: f64,
    /// `sᴴ Q_e s`.
    pub qe_gain: f64,
    /// Generalized eigenvalue of `(Q_e + μI, Q_b)`.
    pub beta: f64,
}

impl BisectionMap {
    pub fn new(p: &P2pProblem) -> Result<Self> {
        let chol = p.q_b.matrix().cholesky()?;
        let whitened_e = chol.whiten(p.q_e.matrix().as_matrix());
        let whitened_i = chol.whiten(&ComplexMatrix::identity(p.q_b.dim()));
        Ok(BisectionMap {
            chol,
            whitened_e,
            whitened_i,
            q_b: p.q_b.matrix().clone(),
            q_e: p.q_e.matrix().clone(),
        })
    }

    pub fn eval(&self, mu_tilde: f64) -> Result<BisectionPoint> {
        if !(0.0..1.0).contains(&mu_tilde) {
            return Err(Error::InvalidParameter(format!("mu_tilde {mu_tilde} outside [0, 1)")));
        }
        let reduced = if mu_tilde == 0.0 {
            self.whitened_e.clone()
        } else {
            let mut t = self.whitened_e.scaled(1.0 - mu_tilde);
            t.axpy(C64::new(mu_tilde, 0.0), &self.whitened_i);
            t
        };
        let (value, waveform) = min_vector_reduced(&HermitianMatrix::from_hermitian_part(&reduced), &self.chol)?;
        Ok(BisectionPoint {
            mu_tilde,
            qb_gain: self.q_b.quad_form(&waveform),
            qe_gain: self.q_e.quad_form(&waveform),
            beta: value / (1.0 - mu_tilde),
            waveform,
        })
    }
}

/// Minimum eigenvector of the reduced matrix `T = L⁻¹ A L⁻ᴴ`, mapped back to
/// `s ∝ L⁻ᴴ u`. Within a degenerate minimum eigenspace the direction with the
/// largest `sᴴ Q_b s` is chosen, which is the lowest-energy choice and the
/// one most likely to satisfy the energy cap.
fn min_vector_reduced(t: &HermitianMatrix, chol: &Cholesky<C64>) -> Result<(f64, Vec<C64>)> {
    let eig = hermitian_eig(t)?;
    let n = eig.len();
    let lowest = eig.values[n - 1];
    let radius = eig.values[0].abs().max(lowest.abs()).max(f64::MIN_POSITIVE);
    let first = (0..n)
        .find(|&i| eig.values[i] - lowest <= TIE_TOL * radius)
        .unwrap_or(n - 1);
    let p = chol.solve_upper_mat(&eig.vectors.columns(first..n));
    let mut s = if p.cols() == 1 {
        p.col(0)
    } else {
        // Over unit u in the eigenspace, sᴴQ_b s = 1/‖L⁻ᴴu‖², so the best
        // combination is the bottom eigenvector of PᴴP.
        let c = hermitian_eig(&HermitianMatrix::gram(&p))?.bottom().vector;
        p.mul_vec(&c)
    };
    normalize(&mut s);
    normalize_phase(&mut s);
    Ok((lowest, s))
}

/// Minimum generalized eigenvector design with `E = γ/(sᴴQ_b s)`.
pub fn eigen_design(p: &P2pProblem) -> Result<EigenOutcome> {
    p.validate()?;
    if !check_feasibility(p)? {
        return Err(no_transmit(p));
    }
    let pt = BisectionMap::new(p)?.eval(0.0)?;
    Ok(eigen_outcome(p, pt))
}

fn eigen_outcome(p: &P2pProblem, pt: BisectionPoint) -> EigenOutcome {
    if pt.qb_gain >= p.threshold() {
        EigenOutcome::Design(WaveformDesign {
            energy: p.gamma / pt.qb_gain,
            waveform: pt.waveform,
            branch: DesignBranch::Eigen,
        })
    } else {
        EigenOutcome::NeedsBisection {
            waveform: pt.waveform,
            qb_gain: pt.qb_gain,
        }
    }
}

fn no_transmit(p: &P2pProblem) -> Error {
    Error::NoTransmit(format!(
        "largest eigenvalue of Q_b is below gamma/E_max = {:.6e}",
        p.threshold()
    ))
}

/// Result of the KKT bisection.
#[derive(Clone, Debug, PartialEq)]
pub struct BisectionResult {
    pub design: WaveformDesign,
    pub mu_tilde: f64,
    /// `μ = μ̃/(1−μ̃)`.
    pub mu: f64,
    pub beta: f64,
    pub iterations: usize,
}

/// Bisection branch. Refuses problems whose eigen solution already meets
/// the energy cap.
///
/// The returned point is the upper end of the final bracket, so
/// `sᴴQ_b s ∈ [γ/E_max, γ/E_max + ε)` and `E = γ/(sᴴQ_b s)` lies within a
/// relative `ε E_max/γ` below `E_max` while Bob's target holds exactly.
pub fn kkt_bisection(p: &P2pProblem) -> Result<BisectionResult> {
    p.validate()?;
    if !check_feasibility(p)? {
        return Err(no_transmit(p));
    }
    let map = BisectionMap::new(p)?;
    let start = map.eval(0.0)?;
    if start.qb_gain >= p.threshold() {
        return Err(Error::Precondition(
            "eigen solution already satisfies the energy cap; bisection not required",
        ));
    }
    bisect(p, &map, start)
}

fn bisect(p: &P2pProblem, map: &BisectionMap, start: BisectionPoint) -> Result<BisectionResult> {
    let target = p.threshold();
    let mut lo = start;
    let mut hi = map.eval(MU_TILDE_MAX)?;
    if hi.qb_gain < target {
        // Feasible only up to rounding at the boundary λ_max = γ/E_max.
        if target - hi.qb_gain < p.epsilon {
            return Ok(finish(p, hi, 0));
        }
        return Err(Error::Bisection {
            iterations: 0,
            residual: target - hi.qb_gain,
            reason: "upper bracket end does not reach gamma/E_max",
        });
    }
    for it in 1..=MAX_BISECTION_ITERATIONS {
        if hi.qb_gain - target < p.epsilon {
            return Ok(finish(p, hi, it - 1));
        }
        let mid = 0.5 * (lo.mu_tilde + hi.mu_tilde);
        if mid <= lo.mu_tilde || mid >= hi.mu_tilde {
            return Err(Error::Bisection {
                iterations: it,
                residual: hi.qb_gain - target,
                reason: "bracket collapsed before reaching tolerance (map is discontinuous)",
            });
        }
        let pt = map.eval(mid)?;
        if pt.qb_gain >= target {
            hi = pt;
        } else {
            lo = pt;
        }
    }
    if hi.qb_gain - target < p.epsilon {
        return Ok(finish(p, hi, MAX_BISECTION_ITERATIONS));
    }
    Err(Error::Bisection {
        iterations: MAX_BISECTION_ITERATIONS,
        residual: hi.qb_gain - target,
        reason: "iteration limit reached",
    })
}

fn finish(p: &P2pProblem, pt: BisectionPoint, iterations: usize) -> BisectionResult {
    let energy = (p.gamma / pt.qb_gain).min(p.e_max);
    BisectionResult {
        mu_tilde: pt.mu_tilde,
        mu: pt.mu_tilde / (1.0 - pt.mu_tilde),
        beta: pt.beta,
        iterations,
        design: WaveformDesign {
            waveform: pt.waveform,
            energy,
            branch: DesignBranch::Bisection,
        },
    }
}

/// Residuals of the three necessary conditions at a bisection solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktResiduals {
    /// `‖(Q_e + μI)s − βQ_b s‖`.
    pub stationarity: f64,
    /// `|sᴴQ_b s − γ/E_max|`.
    pub energy_cap: f64,
    /// `|sᴴs − 1|`.
    pub unit_norm: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.stationarity.max(self.energy_cap).max(self.unit_norm)
    }
}

pub fn kkt_residuals(p: &P2pProblem, s: &[C64], mu: f64, beta: f64) -> KktResiduals {
    let qe_s = p.q_e.matrix().mul_vec(s);
    let qb_s = p.q_b.matrix().mul_vec(s);
    let stationarity = qe_s
        .iter()
        .zip(&qb_s)
        .zip(s)
        .map(|((e, b), x)| (*e + x * mu - b * beta).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let norm_sq: f64 = s.iter().map(|x| x.norm_sqr()).sum();
    KktResiduals {
        stationarity,
        energy_cap: (p.q_b.matrix().quad_form(s) - p.threshold()).abs(),
        unit_norm: (norm_sq - 1.0).abs(),
    }
}

/// Full pipeline: feasibility, eigen branch, bisection branch.
pub fn design_p2p(p: &P2pProblem) -> Result<WaveformDesign> {
    p.validate()?;
    if !check_feasibility(p)? {
        return Err(no_transmit(p));
    }
    let map = BisectionMap::new(p)?;
    let start = map.eval(0.0)?;
    match eigen_outcome(p, start.clone()) {
        EigenOutcome::Design(d) => Ok(d),
        EigenOutcome::NeedsBisection { .. } => Ok(bisect(p, &map, start)?.design),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(values: &[f64]) -> EffectiveQ {
        EffectiveQ::from_hermitian(HermitianMatrix::from_real_diagonal(values)).unwrap()
    }

    #[test]
    fn feasibility_boundary() {
        let p = P2pProblem::new(q(&[1.0, 1.0]), q(&[1.0, 1.0]), 1.0, 1.0).unwrap();
        assert!(check_feasibility(&p).unwrap());
        let p = P2pProblem::new(q(&[1.0, 1.0]), q(&[1.0, 1.0]), 2.0, 1.0).unwrap();
        assert!(!check_feasibility(&p).unwrap());
        assert_eq!(design_p2p(&p).unwrap_err().kind(), "no-transmit");
    }

    #[test]
    fn diagonal_eigen_design() {
        let p = P2pProblem::new(q(&[4.0, 1.0]), q(&[1.0, 1.0]), 4.0, 100.0).unwrap();
        let d = design_p2p(&p).unwrap();
        assert_eq!(d.branch, DesignBranch::Eigen);
        assert!((d.waveform[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(d.waveform[1].norm() < 1e-14);
        assert!((d.energy - 1.0).abs() < 1e-14);
        assert!((d.sinr(&p.q_e) / d.sinr(&p.q_b) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn identical_channels_ratio_one() {
        let p = P2pProblem::new(q(&[3.0, 2.0, 1.0]), q(&[3.0, 2.0, 1.0]), 2.0, 100.0).unwrap();
        let d = design_p2p(&p).unwrap();
        assert!((d.sinr(&p.q_e) / d.sinr(&p.q_b) - 1.0).abs() < 1e-12);
        // Whole space is degenerate; the tie-break picks Bob's strongest mode.
        assert!((d.energy - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tight_cap_uses_bisection() {
        // p_L has sᴴQ_b s ≈ 1.16 < γ/E_max = 1.5 ≤ λ_max(Q_b) = 2.
        let qe = HermitianMatrix::new(ComplexMatrix::from_row_major(
            2,
            2,
            alloc::vec![C64::new(4.0, 0.0), C64::new(1.0, 1.0), C64::new(1.0, -1.0), C64::new(1.0, 0.0)],
        ))
        .unwrap();
        let qe = EffectiveQ::from_hermitian(qe).unwrap();
        let p = P2pProblem::new(q(&[2.0, 1.0]), qe, 1.5, 1.0).unwrap();
        match eigen_design(&p).unwrap() {
            EigenOutcome::NeedsBisection { qb_gain, .. } => assert!(qb_gain < p.threshold()),
            other => panic!("expected bisection, got {other:?}"),
        }
        let r = kkt_bisection(&p).unwrap();
        assert_eq!(r.design.branch, DesignBranch::Bisection);
        assert!(r.mu > 0.0 && r.beta > 0.0);
        let res = kkt_residuals(&p, &r.design.waveform, r.mu, r.beta);
        assert!(res.max() < 1e-8, "{res:?}");
        assert!((r.design.energy - 1.0).abs() < 1e-7);
        let achieved = r.design.sinr(&p.q_b);
        assert!((achieved - 1.5).abs() / 1.5 < 1e-12);
    }

    #[test]
    fn bisection_refuses_when_eigen_suffices() {
        let p = P2pProblem::new(q(&[4.0, 1.0]), q(&[1.0, 1.0]), 4.0, 100.0).unwrap();
        assert_eq!(kkt_bisection(&p).unwrap_err().kind(), "precondition");
    }

    #[test]
    fn map_at_zero_is_eigen_design() {
        let p = P2pProblem::new(q(&[2.0, 1.0, 0.5]), q(&[0.3, 1.0, 2.0]), 1.0, 100.0).unwrap();
        let map = BisectionMap::new(&p).unwrap();
        let at0 = map.eval(0.0).unwrap();
        let near0 = map.eval(1e-12).unwrap();
        let EigenOutcome::Design(d) = eigen_design(&p).unwrap() else {
            panic!("expected eigen branch")
        };
        assert_eq!(at0.waveform, d.waveform);
        let diff: f64 = near0.waveform.iter().zip(&d.waveform).map(|(a, b)| (a - b).norm()).sum();
        assert!(diff < 1e-9);
    }
}
