//! Semidefinite relaxation for secure multicasting.
//!
//! The multicast QCQP over `x = √E s` is lifted to `X = x xᴴ` and the rank
//! constraint dropped:
//!
//! ```text
//! min Tr(C X)  s.t.  Tr(Q_{b,k} X) ≥ γ_k,  Tr X ≤ E_max,  X ⪰ 0
//! ```
//!
//! with `C = Q_e` (minimum eavesdropper SINR) or `C = I` (minimum energy).
//! Hermitian problems are solved through the real embedding
//! `X ↦ [[Re X, −Im X], [Im X, Re X]]`, which doubles the dimension and every
//! trace; all reported quantities are in the complex domain.

mod multicast;
mod solver;

pub use multicast::{
    extract_rank1, gaussian_randomization, multicast_design, sum_sinr_design, Mode, MulticastDesign,
    MulticastProblem, DEFAULT_RANDOMIZATION_SAMPLES, DEFAULT_RANK_TOL,
};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{hermitian_eig, ComplexMatrix, HermitianMatrix, RealMatrix};
use crate::{Error, Result};
use solver::{not_converged, RealSdp};

/// `min Tr(C X)` s.t. `Tr(A_k X) ≥ b_k`, `Tr X ≤ c`, `X ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub objective: HermitianMatrix,
    pub constraints: Vec<(HermitianMatrix, f64)>,
    pub trace_cap: f64,
}

impl SdpProblem {
    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::Dimension("SDP of dimension zero".into()));
        }
        for (k, (a, b)) in self.constraints.iter().enumerate() {
            if a.dim() != n {
                return Err(Error::Dimension(format!(
                    "constraint {k} is {0}x{0}, objective is {n}x{n}",
                    a.dim()
                )));
            }
            if !(*b > 0.0) || !b.is_finite() {
                return Err(Error::InvalidParameter(format!("constraint {k} bound must be positive, got {b}")));
            }
        }
        if !(self.trace_cap > 0.0) || !self.trace_cap.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "trace cap must be positive, got {}",
                self.trace_cap
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SdpSettings {
    fn default() -> Self {
        SdpSettings {
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpSolution {
    pub x: HermitianMatrix,
    /// `Tr(C X)`.
    pub objective: f64,
    /// `Σ y_k b_k + y_cap c`.
    pub dual_objective: f64,
    /// `|objective − dual_objective|`.
    pub gap: f64,
    /// Largest of the constraint shortfalls, the cap excess and `−λ_min(X)`.
    pub max_violation: f64,
    pub iterations: usize,
}

/// Solve with a phase-1 fallback: when the main iteration fails, the largest
/// `τ` with `Tr(A_k X) ≥ τ b_k` for all `k` under the same cap decides between
/// an infeasibility report (`τ < 1`) and a convergence failure.
pub fn solve_sdp(p: &SdpProblem, settings: &SdpSettings) -> Result<SdpSolution> {
    p.validate()?;
    // Necessary condition: each constraint alone must be reachable.
    let mut reachable = true;
    for (a, b) in &p.constraints {
        if hermitian_eig(a)?.values[0] * p.trace_cap < *b {
            reachable = false;
        }
    }
    if reachable {
        let real = embed(p, false);
        match real.problem.solve(settings.tol, settings.max_iter) {
            Ok(sol) => return Ok(finish(p, &real, sol.x, &sol.y, sol.iterations)),
            Err(failure) => {
                let tau = phase_one(p, settings)?;
                if tau < 1.0 - settings.tol {
                    return Err(Error::SdpInfeasible { max_min_ratio: tau });
                }
                return Err(not_converged(&failure));
            }
        }
    }
    let tau = phase_one(p, settings)?;
    Err(Error::SdpInfeasible { max_min_ratio: tau })
}

/// Largest `τ ≥ 0` with `Tr(A_k X) ≥ τ b_k`, `Tr X ≤ c`, `X ⪰ 0`.
pub fn phase_one(p: &SdpProblem, settings: &SdpSettings) -> Result<f64> {
    p.validate()?;
    let real = embed(p, true);
    let sol = real
        .problem
        .solve(settings.tol, settings.max_iter)
        .map_err(|f| not_converged(&f))?;
    Ok(*sol.t.last().expect("phase-1 has a tau variable"))
}

struct Embedded {
    problem: RealSdp,
    /// Row scale factors: row `i` of `problem` is the original row divided by
    /// `row_scale[i]`.
    row_scale: Vec<f64>,
}

/// Real standard form. Rows `0..K` are `½⟨Ã_k, X̃⟩ − t_k = b_k`, row `K` is
/// `½⟨I, X̃⟩ + t_K = c`. In phase-1 form an extra slack `τ` enters every
/// constraint row as `−τ b_k`, the bounds become zero and the cost is `−τ`.
fn embed(p: &SdpProblem, phase_one: bool) -> Embedded {
    let k = p.constraints.len();
    let n2 = 2 * p.dim();
    let m = k + 1;
    let n_lp = if phase_one { k + 2 } else { k + 1 };
    let mut a: Vec<RealMatrix> = Vec::with_capacity(m);
    let mut a_lp = RealMatrix::zeros(m, n_lp);
    let mut b = vec![0.0; m];
    for (i, (ak, bk)) in p.constraints.iter().enumerate() {
        a.push(ak.as_matrix().real_embedding().scaled(0.5));
        a_lp[(i, i)] = -1.0;
        if phase_one {
            a_lp[(i, k + 1)] = -bk;
        } else {
            b[i] = *bk;
        }
    }
    a.push(RealMatrix::identity(n2).scaled(0.5));
    a_lp[(k, k)] = 1.0;
    b[k] = p.trace_cap;

    let mut row_scale = vec![1.0; m];
    for i in 0..m {
        let lp: f64 = a_lp.row(i).iter().map(|v| v * v).sum();
        let s = (a[i].frobenius_norm().powi(2) + lp).sqrt();
        row_scale[i] = s;
        a[i] = a[i].scaled(1.0 / s);
        for l in 0..n_lp {
            a_lp[(i, l)] /= s;
        }
        b[i] /= s;
    }

    let mut c_lp = vec![0.0; n_lp];
    let c = if phase_one {
        c_lp[k + 1] = -1.0;
        RealMatrix::zeros(n2, n2)
    } else {
        p.objective.as_matrix().real_embedding().scaled(0.5)
    };
    Embedded {
        problem: RealSdp { c, a, a_lp, c_lp, b },
        row_scale,
    }
}

fn finish(p: &SdpProblem, real: &Embedded, x_real: RealMatrix, y: &[f64], iterations: usize) -> SdpSolution {
    let x = HermitianMatrix::from_hermitian_part(&ComplexMatrix::from_real_embedding(&x_real));
    let objective = p.objective.trace_product(&x);
    let mut dual_objective = 0.0;
    for (i, yi) in y.iter().enumerate() {
        let bound = if i < p.constraints.len() {
            p.constraints[i].1
        } else {
            p.trace_cap
        };
        dual_objective += yi / real.row_scale[i] * bound;
    }
    let mut max_violation: f64 = 0.0;
    for (a, b) in &p.constraints {
        max_violation = max_violation.max(b - a.trace_product(&x));
    }
    max_violation = max_violation.max(x.trace() - p.trace_cap);
    if let Ok(eig) = hermitian_eig(&x) {
        max_violation = max_violation.max(-eig.values[eig.len() - 1]);
    }
    SdpSolution {
        objective,
        dual_objective,
        gap: (objective - dual_objective).abs(),
        max_violation: max_violation.max(0.0),
        iterations,
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_trace_diagonal() {
        let p = SdpProblem {
            objective: HermitianMatrix::identity(2),
            constraints: vec![(HermitianMatrix::from_real_diagonal(&[4.0, 1.0]), 3.0)],
            trace_cap: 100.0,
        };
        let sol = solve_sdp(&p, &SdpSettings::default()).unwrap();
        assert!((sol.objective - 0.75).abs() < 1e-7, "{sol:?}");
        assert!((sol.x.as_matrix()[(0, 0)].re - 0.75).abs() < 1e-7);
        assert!(sol.max_violation <= 1e-8);
        assert!(sol.gap <= 1e-8 * (1.0 + sol.objective.abs()));
    }

    #[test]
    fn infeasible_is_reported() {
        let p = SdpProblem {
            objective: HermitianMatrix::identity(2),
            constraints: vec![(HermitianMatrix::from_real_diagonal(&[4.0, 1.0]), 30.0)],
            trace_cap: 1.0,
        };
        match solve_sdp(&p, &SdpSettings::default()) {
            Err(Error::SdpInfeasible { max_min_ratio }) => assert!((max_min_ratio - 4.0 / 30.0).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jointly_infeasible_needs_phase_one() {
        // Each constraint alone is reachable, both together are not.
        let p = SdpProblem {
            objective: HermitianMatrix::identity(2),
            constraints: vec![
                (HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), 0.8),
                (HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), 0.8),
            ],
            trace_cap: 1.0,
        };
        match solve_sdp(&p, &SdpSettings::default()) {
            Err(Error::SdpInfeasible { max_min_ratio }) => assert!((max_min_ratio - 0.625).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }
}
