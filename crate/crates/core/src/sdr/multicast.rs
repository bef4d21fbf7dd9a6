use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;
use rand::Rng;

use super::{solve_sdp, SdpProblem, SdpSettings, SdpSolution};
use crate::channel::EffectiveQ;
use crate::kernel::{hermitian_eig, normalize, normalize_phase, HermitianMatrix, C64};
use crate::p2p::{design_p2p, DesignBranch, P2pProblem, WaveformDesign};
use crate::rng::complex_gaussian;
use crate::{Error, Result};

/// `λ₂/λ₁` at or below this counts as rank one.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;
pub const DEFAULT_RANDOMIZATION_SAMPLES: usize = 1000;

/// What the multicast SDP minimises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Eve's SINR, `Tr(Q_e X)`.
    MinEve,
    /// Transmit energy, `Tr X`, leaving the rest of the budget for AN.
    MinEnergy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MulticastProblem {
    pub q_bs: Vec<EffectiveQ>,
    /// Required in [`Mode::MinEve`].
    pub q_e: Option<EffectiveQ>,
    /// Linear targets, one per receiver.
    pub gammas: Vec<f64>,
    pub e_max: f64,
    pub samples: usize,
    pub rank_tol: f64,
    pub settings: SdpSettings,
}

impl MulticastProblem {
    pub fn new(q_bs: Vec<EffectiveQ>, q_e: Option<EffectiveQ>, gammas: Vec<f64>, e_max: f64) -> Result<Self> {
        let p = MulticastProblem {
            q_bs,
            q_e,
            gammas,
            e_max,
            samples: DEFAULT_RANDOMIZATION_SAMPLES,
            rank_tol: DEFAULT_RANK_TOL,
            settings: SdpSettings::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_bs.is_empty() {
            return Err(Error::InvalidParameter("multicast needs at least one receiver".into()));
        }
        if self.q_bs.len() != self.gammas.len() {
            return Err(Error::Dimension(format!(
                "{} receivers but {} SINR targets",
                self.q_bs.len(),
                self.gammas.len()
            )));
        }
        let l = self.q_bs[0].dim();
        if self.q_bs.iter().chain(self.q_e.iter()).any(|q| q.dim() != l) {
            return Err(Error::Dimension("receiver Q matrices differ in dimension".into()));
        }
        if let Some(g) = self.gammas.iter().find(|g| !(**g > 0.0) || !g.is_finite()) {
            return Err(Error::InvalidParameter(format!("SINR target must be positive, got {g}")));
        }
        if !(self.e_max > 0.0) || !self.e_max.is_finite() {
            return Err(Error::InvalidParameter(format!("E_max must be positive, got {}", self.e_max)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.q_bs[0].dim()
    }

    fn cost(&self, mode: Mode) -> Result<HermitianMatrix> {
        match mode {
            Mode::MinEnergy => Ok(HermitianMatrix::identity(self.dim())),
            Mode::MinEve => self
                .q_e
                .as_ref()
                .map(|q| q.matrix().clone())
                .ok_or(Error::InvalidParameter("min-eve mode needs Q_e".into())),
        }
    }

    /// The lifted SDP for `mode`.
    pub fn sdp(&self, mode: Mode) -> Result<SdpProblem> {
        self.validate()?;
        Ok(SdpProblem {
            objective: self.cost(mode)?,
            constraints: self
                .q_bs
                .iter()
                .zip(&self.gammas)
                .map(|(q, g)| (q.matrix().clone(), *g))
                .collect(),
            trace_cap: self.e_max,
        })
    }

    /// `x ↦ xᴴ C x` for the mode's cost.
    pub fn objective(&self, mode: Mode, x: &[C64]) -> Result<f64> {
        Ok(self.cost(mode)?.quad_form(x))
    }

    /// `min_k (xᴴ Q_{b,k} x)/γ_k`, which is at least one iff every receiver
    /// meets its target.
    fn min_ratio(&self, x: &[C64]) -> f64 {
        self.q_bs
            .iter()
            .zip(&self.gammas)
            .map(|(q, g)| q.matrix().quad_form(x) / g)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(E, s) = (λ₁, a₁)` when `λ₂/λ₁ ≤ rank_tol`.
pub fn extract_rank1(sol: &SdpSolution, rank_tol: f64) -> Result<Option<(f64, Vec<C64>)>> {
    let eig = hermitian_eig(&sol.x)?;
    let l1 = eig.values[0];
    if !(l1 > 0.0) {
        return Ok(None);
    }
    let l2 = if eig.len() > 1 { eig.values[1].max(0.0) } else { 0.0 };
    if l2 / l1 > rank_tol {
        return Ok(None);
    }
    Ok(Some((l1, eig.top().vector)))
}

/// Draw `samples` points `x ~ CN(0, X)`, scale each by
/// `√(max_k γ_k / xᴴQ_{b,k}x)` so the tightest receiver is exactly at its
/// target, drop those above the energy cap and keep the best objective.
pub fn gaussian_randomization<R: Rng + ?Sized>(
    sol: &SdpSolution,
    p: &MulticastProblem,
    mode: Mode,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, Vec<C64>)> {
    let cost = p.cost(mode)?;
    let eig = hermitian_eig(&sol.x)?;
    let n = eig.len();
    // X^{1/2} with negative eigenvalues clamped.
    let roots: Vec<f64> = eig.values.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut best: Option<(f64, Vec<C64>)> = None;
    for _ in 0..samples {
        let g: Vec<C64> = (0..n).map(|i| complex_gaussian(rng, 1.0) * roots[i]).collect();
        let mut x = eig.vectors.mul_vec(&g);
        let ratio = p.min_ratio(&x);
        if !(ratio > 0.0) || !ratio.is_finite() {
            continue;
        }
        let scale = (1.0 / ratio).sqrt();
        for v in x.iter_mut() {
            *v *= scale;
        }
        let energy: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        if energy > p.e_max {
            continue;
        }
        let obj = cost.quad_form(&x);
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, x));
        }
    }
    let (_, mut x) = best.ok_or(Error::RandomizationFailed { samples })?;
    let energy = normalize(&mut x).powi(2);
    normalize_phase(&mut x);
    Ok((energy, x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MulticastDesign {
    pub design: WaveformDesign,
    /// Optimal value of the relaxation, a lower bound on the QCQP optimum.
    pub lower_bound: f64,
    pub sdp: SdpSolution,
}

/// Solve the relaxation, then extract a rank-one solution or randomize.
///
/// A rank-one solution is rescaled so the tightest receiver sits exactly at
/// its target, capped at `E_max`.
pub fn multicast_design<R: Rng + ?Sized>(p: &MulticastProblem, mode: Mode, rng: &mut R) -> Result<MulticastDesign> {
    let sdp = match solve_sdp(&p.sdp(mode)?, &p.settings) {
        Ok(s) => s,
        Err(e @ Error::SdpInfeasible { .. }) => {
            return Err(Error::NoTransmit(format!("multicast targets unreachable: {e}")));
        }
        Err(e) => return Err(e),
    };
    let (waveform, energy, branch) = match extract_rank1(&sdp, p.rank_tol)? {
        Some((e, s)) => {
            let ratio = p.min_ratio(&s) * e;
            let energy = if ratio > 0.0 { (e / ratio).min(p.e_max) } else { e };
            (s, energy, DesignBranch::SdrRankOne)
        }
        None => match gaussian_randomization(&sdp, p, mode, p.samples, rng) {
            Ok((e, s)) => (s, e, DesignBranch::SdrRandomized),
            Err(e) => return Err(Error::NoTransmit(format!("{e}"))),
        },
    };
    Ok(MulticastDesign {
        design: WaveformDesign {
            waveform,
            energy,
            branch,
        },
        lower_bound: sdp.objective.min(sdp.dual_objective),
        sdp,
    })
}

/// Single-constraint surrogate: the point-to-point design against
/// `Q̃_b = Σ_k Q_{b,k}`.
pub fn sum_sinr_design(q_bs: &[EffectiveQ], q_e: &EffectiveQ, gamma: f64, e_max: f64) -> Result<WaveformDesign> {
    let first = q_bs
        .first()
        .ok_or(Error::InvalidParameter("sum-SINR design needs at least one receiver".into()))?;
    let mut total = first.matrix().clone();
    for q in &q_bs[1..] {
        if q.dim() != total.dim() {
            return Err(Error::Dimension("receiver Q matrices differ in dimension".into()));
        }
        total = total.add(q.matrix());
    }
    let p = P2pProblem::new(EffectiveQ::from_hermitian(total)?, q_e.clone(), gamma, e_max)?;
    design_p2p(&p)
}
