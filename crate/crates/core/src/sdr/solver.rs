//! Dense primal-dual interior-point method for one real PSD block plus one
//! nonnegative orthant:
//!
//! ```text
//! min ⟨C, X⟩ + cₗᵀt   s.t.  ⟨A_i, X⟩ + a_iᵀt = b_i,  X ⪰ 0,  t ≥ 0
//! max bᵀy             s.t.  C − Σ y_i A_i = S ⪰ 0,  cₗ − Σ y_i a_i = z ≥ 0
//! ```
//!
//! Search directions use Nesterov–Todd scaling and Mehrotra's
//! predictor-corrector; primal and dual step lengths are chosen separately.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // float methods for no_std; some toolchains flag it unused
use num_traits::Float;

use crate::kernel::{symmetric_eig, Cholesky, RealMatrix};
use crate::Error;

/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.98;
/// Growth in `‖y‖` or `‖X‖` treated as divergence (an infeasibility symptom).
const DIVERGENCE: f64 = 1e12;

#[derive(Clone, Debug)]
pub(crate) struct RealSdp {
    pub c: RealMatrix,
    pub a: Vec<RealMatrix>,
    /// `m × p`, row `i` is `a_iᵀ`.
    pub a_lp: RealMatrix,
    pub c_lp: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug)]
pub(crate) struct RealSolution {
    pub x: RealMatrix,
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub iterations: usize,
}

/// Why the iteration stopped without meeting the tolerances.
#[derive(Clone, Debug)]
pub(crate) struct Failure {
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

#[derive(Clone, Debug)]
struct Iterate {
    x: RealMatrix,
    t: Vec<f64>,
    y: Vec<f64>,
    s: RealMatrix,
    z: Vec<f64>,
}

struct Scaling {
    /// `G` with `Gᵀ S G = G⁻¹ X G⁻ᵀ = Λ`.
    g: RealMatrix,
    g_inv: RealMatrix,
    /// `W = G Gᵀ`.
    w: RealMatrix,
    lambda: Vec<f64>,
}

struct Direction {
    dx: RealMatrix,
    dt: Vec<f64>,
    dy: Vec<f64>,
    ds: RealMatrix,
    dz: Vec<f64>,
}

impl RealSdp {
    fn m(&self) -> usize {
        self.b.len()
    }

    fn n(&self) -> usize {
        self.c.rows()
    }

    fn p(&self) -> usize {
        self.c_lp.len()
    }

    fn apply(&self, x: &RealMatrix, t: &[f64]) -> Vec<f64> {
        (0..self.m())
            .map(|i| self.a[i].inner(x) + self.a_lp.row(i).iter().zip(t).map(|(a, v)| a * v).sum::<f64>())
            .collect()
    }

    fn adjoint(&self, y: &[f64]) -> (RealMatrix, Vec<f64>) {
        let mut mat = RealMatrix::zeros(self.n(), self.n());
        let mut lp = vec![0.0; self.p()];
        for (i, yi) in y.iter().enumerate() {
            mat.axpy(*yi, &self.a[i]);
            for (l, a) in lp.iter_mut().zip(self.a_lp.row(i)) {
                *l += yi * a;
            }
        }
        (mat, lp)
    }

    fn initial(&self) -> Iterate {
        let n = self.n() as f64;
        let mut xi: f64 = 10.0f64.max(n.sqrt());
        let mut eta: f64 = 10.0f64.max(n.sqrt()).max(self.c.frobenius_norm());
        for i in 0..self.m() {
            let norm = self.a[i].frobenius_norm() + norm2(self.a_lp.row(i));
            xi = xi.max(n * (1.0 + self.b[i].abs()) / (1.0 + norm));
            eta = eta.max(norm);
        }
        let mut x = RealMatrix::identity(self.n());
        x = x.scaled(xi);
        let mut s = RealMatrix::identity(self.n());
        s = s.scaled(eta);
        Iterate {
            x,
            t: vec![xi; self.p()],
            y: vec![0.0; self.m()],
            s,
            z: vec![eta; self.p()],
        }
    }

    /// Solve to tolerance `tol` on the relative primal and dual residuals and
    /// on the duality gap relative to the objective itself. If the iteration
    /// stalls first, the last iterate whose gap was within `tol·(1 + |obj|)`
    /// is returned instead.
    pub(crate) fn solve(&self, tol: f64, max_iter: usize) -> core::result::Result<RealSolution, Failure> {
        let n_cone = (self.n() + self.p()) as f64;
        let b_norm = 1.0 + norm2(&self.b);
        let c_norm = 1.0 + self.c.frobenius_norm() + norm2(&self.c_lp);
        let mut it = self.initial();
        let mut acceptable: Option<RealSolution> = None;
        let mut last = Failure {
            iterations: 0,
            primal_residual: f64::INFINITY,
            dual_residual: f64::INFINITY,
            gap: f64::INFINITY,
        };
        for iter in 0..=max_iter {
            let ax = self.apply(&it.x, &it.t);
            let r_p: Vec<f64> = self.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let (aty, aty_lp) = self.adjoint(&it.y);
            let r_d = self.c.sub(&aty).sub(&it.s);
            let r_dlp: Vec<f64> = (0..self.p()).map(|l| self.c_lp[l] - aty_lp[l] - it.z[l]).collect();
            let pobj = self.c.inner(&it.x) + dot(&self.c_lp, &it.t);
            let dobj = dot(&self.b, &it.y);
            let comp = it.x.inner(&it.s) + dot(&it.t, &it.z);
            let mu = comp / n_cone;

            let pinf = norm2(&r_p) / b_norm;
            let dinf = (r_d.frobenius_norm() + norm2(&r_dlp)) / c_norm;
            let abs_gap = (pobj - dobj).abs().max(comp);
            let gap = abs_gap / (1.0 + pobj.abs());
            last = Failure {
                iterations: iter,
                primal_residual: pinf,
                dual_residual: dinf,
                gap,
            };
            if pinf <= tol && dinf <= tol && gap <= tol {
                let sol = RealSolution {
                    x: it.x.clone(),
                    t: it.t.clone(),
                    y: it.y.clone(),
                    iterations: iter,
                };
                if abs_gap <= tol * pobj.abs().max(dobj.abs()) {
                    return Ok(sol);
                }
                acceptable = Some(sol);
            }
            let give_up = |acceptable: Option<RealSolution>, last: Failure| acceptable.ok_or(last);
            if iter == max_iter
                || !mu.is_finite()
                || norm2(&it.y) > DIVERGENCE
                || it.x.frobenius_norm() > DIVERGENCE
            {
                return give_up(acceptable, last);
            }

            let Some(sc) = scaling(&it.x, &it.s) else {
                return give_up(acceptable, last);
            };
            let Some(schur) = self.schur(&sc, &it) else {
                return give_up(acceptable, last);
            };

            // Predictor.
            let rhs_aff = RealMatrix::diag(&sc.lambda.iter().map(|l| -l * l).collect::<Vec<_>>());
            let rhs_lp_aff: Vec<f64> = it.t.iter().zip(&it.z).map(|(t, z)| -t * z).collect();
            let aff = self.direction(&sc, &schur, &it, &r_p, &r_d, &r_dlp, &rhs_aff, &rhs_lp_aff);
            let ap = step_length(&it.x, &aff.dx, &it.t, &aff.dt);
            let ad = step_length(&it.s, &aff.ds, &it.z, &aff.dz);
            let (ap, ad) = (ap.min(1.0), ad.min(1.0));
            let comp_aff = it.x.add(&aff.dx.scaled(ap)).inner(&it.s.add(&aff.ds.scaled(ad)))
                + (0..self.p())
                    .map(|l| (it.t[l] + ap * aff.dt[l]) * (it.z[l] + ad * aff.dz[l]))
                    .sum::<f64>();
            let sigma = (comp_aff / comp).clamp(0.0, 1.0).powi(3);

            // Corrector: σμI − Λ² − sym(D_X D_S) in the scaled space.
            let dx_s = sc.g_inv.matmul(&aff.dx).matmul(&sc.g_inv.adjoint());
            let ds_s = sc.g.adjoint().matmul(&aff.ds).matmul(&sc.g);
            let second = dx_s.matmul(&ds_s);
            let mut rhs = RealMatrix::from_fn(self.n(), self.n(), |i, j| -0.5 * (second[(i, j)] + second[(j, i)]));
            for i in 0..self.n() {
                rhs[(i, i)] += sigma * mu - sc.lambda[i] * sc.lambda[i];
            }
            let rhs_lp: Vec<f64> = (0..self.p())
                .map(|l| sigma * mu - it.t[l] * it.z[l] - aff.dt[l] * aff.dz[l])
                .collect();
            let d = self.direction(&sc, &schur, &it, &r_p, &r_d, &r_dlp, &rhs, &rhs_lp);
            let ap = (STEP_FRACTION * step_length(&it.x, &d.dx, &it.t, &d.dt)).min(1.0);
            let ad = (STEP_FRACTION * step_length(&it.s, &d.ds, &it.z, &d.dz)).min(1.0);
            if ap < 1e-12 && ad < 1e-12 {
                return give_up(acceptable, last);
            }
            it.x.axpy(ap, &d.dx);
            it.x = it.x.hermitian_part();
            for l in 0..self.p() {
                it.t[l] += ap * d.dt[l];
                it.z[l] += ad * d.dz[l];
            }
            for (y, dy) in it.y.iter_mut().zip(&d.dy) {
                *y += ad * dy;
            }
            it.s.axpy(ad, &d.ds);
            it.s = it.s.hermitian_part();
        }
        acceptable.ok_or(last)
    }

    /// Cholesky factor of the Schur complement
    /// `M_ij = ⟨A_i, W A_j W⟩ + Σ_l a_il (t_l/z_l) a_jl`.
    fn schur(&self, sc: &Scaling, it: &Iterate) -> Option<Cholesky<f64>> {
        let m = self.m();
        let waw: Vec<RealMatrix> = self.a.iter().map(|a| sc.w.matmul(a).matmul(&sc.w)).collect();
        let mut mm = RealMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let mut v = self.a[i].inner(&waw[j]);
                for l in 0..self.p() {
                    v += self.a_lp[(i, l)] * (it.t[l] / it.z[l]) * self.a_lp[(j, l)];
                }
                mm[(i, j)] = v;
                mm[(j, i)] = v;
            }
        }
        Cholesky::with_pivot_tolerance(&mm, 0.0).ok()
    }

    /// Solve the Newton system for a given complementarity right-hand side
    /// (`rhs` in the scaled space where `X` and `S` are both `Λ`).
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        sc: &Scaling,
        schur: &Cholesky<f64>,
        it: &Iterate,
        r_p: &[f64],
        r_d: &RealMatrix,
        r_dlp: &[f64],
        rhs: &RealMatrix,
        rhs_lp: &[f64],
    ) -> Direction {
        let n = self.n();
        // Λ R + R Λ = 2 rhs, then ΔX + W ΔS W = G R Gᵀ.
        let r = RealMatrix::from_fn(n, n, |i, j| 2.0 * rhs[(i, j)] / (sc.lambda[i] + sc.lambda[j]));
        let rc = sc.g.matmul(&r).matmul(&sc.g.adjoint());
        let rc_lp: Vec<f64> = (0..self.p()).map(|l| rhs_lp[l] / it.z[l]).collect();
        let d_lp: Vec<f64> = (0..self.p()).map(|l| it.t[l] / it.z[l]).collect();

        let wrw = sc.w.matmul(r_d).matmul(&sc.w);
        let base_x = rc.sub(&wrw);
        let base_t: Vec<f64> = (0..self.p()).map(|l| rc_lp[l] - d_lp[l] * r_dlp[l]).collect();
        let a_base = self.apply(&base_x, &base_t);
        let rhs_y: Vec<f64> = r_p.iter().zip(&a_base).map(|(r, a)| r - a).collect();
        let dy = schur.solve(&rhs_y);

        let (aty, aty_lp) = self.adjoint(&dy);
        let ds = r_d.sub(&aty);
        let dz: Vec<f64> = (0..self.p()).map(|l| r_dlp[l] - aty_lp[l]).collect();
        let dx = rc.sub(&sc.w.matmul(&ds).matmul(&sc.w)).hermitian_part();
        let dt: Vec<f64> = (0..self.p()).map(|l| rc_lp[l] - d_lp[l] * dz[l]).collect();
        Direction { dx, dt, dy, ds, dz }
    }
}

/// NT scaling from `X = L Lᵀ` and `Lᵀ S L = U Λ² Uᵀ`: `G = L U Λ^{-1/2}`.
fn scaling(x: &RealMatrix, s: &RealMatrix) -> Option<Scaling> {
    let chol = Cholesky::with_pivot_tolerance(x, 0.0).ok()?;
    let l = chol.factor();
    let lsl = l.adjoint().matmul(s).matmul(l).hermitian_part();
    let (vals, u) = symmetric_eig(&lsl).ok()?;
    if vals.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let lambda: Vec<f64> = vals.iter().map(|v| v.sqrt()).collect();
    let n = lambda.len();
    let lu = l.matmul(&u);
    let g = RealMatrix::from_fn(n, n, |i, j| lu[(i, j)] / lambda[j].sqrt());
    // G⁻¹ = Λ^{1/2} Uᵀ L⁻¹
    let l_inv = chol.solve_lower_mat(&RealMatrix::identity(n));
    let ut_linv = u.adjoint().matmul(&l_inv);
    let g_inv = RealMatrix::from_fn(n, n, |i, j| ut_linv[(i, j)] * lambda[i].sqrt());
    let w = g.matmul(&g.adjoint()).hermitian_part();
    Some(Scaling { g, g_inv, w, lambda })
}

/// Largest `α` with `X + αΔX ⪰ 0` and `t + αΔt ≥ 0` (may be infinite).
fn step_length(x: &RealMatrix, dx: &RealMatrix, t: &[f64], dt: &[f64]) -> f64 {
    let mut alpha = f64::INFINITY;
    for (v, d) in t.iter().zip(dt) {
        if *d < 0.0 {
            alpha = alpha.min(-v / d);
        }
    }
    let Ok(chol) = Cholesky::with_pivot_tolerance(x, 0.0) else {
        return 0.0;
    };
    let m = chol.whiten(dx);
    match symmetric_eig(&m) {
        Ok((vals, _)) => {
            let min = vals[vals.len() - 1];
            if min < 0.0 {
                alpha = alpha.min(-1.0 / min);
            }
        }
        Err(_) => return 0.0,
    }
    alpha
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Map an iteration failure to the public error.
pub(crate) fn not_converged(f: &Failure) -> Error {
    Error::SdpNotConverged {
        iterations: f.iterations,
        primal_residual: f.primal_residual,
        dual_residual: f.dual_residual,
        gap: f.gap,
    }
}
