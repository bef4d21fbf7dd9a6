#![allow(dead_code)]

use rand::Rng;
use wavesec_core::channel::{EffectiveQ, Link, ScenarioConfig};
use wavesec_core::kernel::{hermitian_eig, normalize, ComplexMatrix, HermitianMatrix, C64};
use wavesec_core::p2p::{BisectionMap, P2pProblem};
use wavesec_core::rng::{complex_gaussian, StreamRng};

pub fn random_vector(rng: &mut StreamRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng, 1.0)).collect()
}

pub fn random_unit(rng: &mut StreamRng, n: usize) -> Vec<C64> {
    let mut v = random_vector(rng, n);
    normalize(&mut v);
    v
}

pub fn random_matrix(rng: &mut StreamRng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, 1.0))
}

pub fn random_hermitian(rng: &mut StreamRng, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&random_matrix(rng, n, n))
}

/// `GᴴG/n + δI`, comfortably positive definite.
pub fn random_hpd(rng: &mut StreamRng, n: usize) -> HermitianMatrix {
    HermitianMatrix::gram(&random_matrix(rng, n + 2, n))
        .scaled(1.0 / n as f64)
        .shifted(0.05)
}

pub fn random_q(rng: &mut StreamRng, n: usize) -> EffectiveQ {
    EffectiveQ::from_hermitian(random_hpd(rng, n)).unwrap()
}

pub fn scenario(chips: usize) -> ScenarioConfig {
    ScenarioConfig {
        chips,
        ..ScenarioConfig::default()
    }
}

/// Bob and Eve links from the default interferer model.
pub fn links(rng: &mut StreamRng, chips: usize) -> (Link, Link) {
    let cfg = scenario(chips);
    let bob = Link::draw(&cfg, rng).unwrap();
    let eve = Link::draw(&cfg, rng).unwrap();
    (bob, eve)
}

pub fn lambda_max(q: &HermitianMatrix) -> f64 {
    hermitian_eig(q).unwrap().values[0]
}

/// A problem whose eigen solution needs more than `E_max` but which is still
/// feasible: `γ/E_max` is placed strictly between `p_Lᴴ Q_b p_L` and
/// `λ_max(Q_b)`.
pub fn bisection_instance(rng: &mut StreamRng, q_b: EffectiveQ, q_e: EffectiveQ) -> P2pProblem {
    let gamma = 10f64.powf(rng.random_range(0.0..1.0));
    let probe = P2pProblem::new(q_b.clone(), q_e.clone(), gamma, 1.0).unwrap();
    let g0 = BisectionMap::new(&probe).unwrap().eval(0.0).unwrap().qb_gain;
    let top = lambda_max(q_b.matrix());
    let u = rng.random_range(0.05..0.95);
    let threshold = g0 + u * (top - g0);
    P2pProblem::new(q_b, q_e, gamma, gamma / threshold).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
