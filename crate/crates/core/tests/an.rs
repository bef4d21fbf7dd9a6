mod common;

use common::*;
use rand::Rng;
use wavesec_core::an::{an_covariance, an_pipeline_multicast, an_pipeline_single, min_energy_design, sample_an};
use wavesec_core::channel::{sinr_with_an, Link};
use wavesec_core::kernel::{dot, hermitian_eig, ComplexMatrix, C64};
use wavesec_core::p2p::{DesignBranch, WaveformDesign};
use wavesec_core::rng::substream;

#[test]
fn min_energy_beats_random_waveforms() {
    let mut rng = substream(400, 0);
    for _ in 0..5 {
        let (bob, _) = links(&mut rng, 3);
        let d = min_energy_design(&bob.q, 2.0, 1e3).unwrap();
        for _ in 0..200_000 {
            let s = random_unit(&mut rng, 3);
            let energy = 2.0 / bob.q.matrix().quad_form(&s);
            assert!(energy >= d.energy * (1.0 - 1e-12));
        }
        assert!(rel(d.sinr(&bob.q), 2.0) <= 1e-12);
    }
}

#[test]
fn min_energy_respects_cap() {
    let mut rng = substream(401, 0);
    let (bob, _) = links(&mut rng, 8);
    let top = lambda_max(bob.q.matrix());
    assert!(min_energy_design(&bob.q, 2.0, 2.0 / top * 1.001).is_ok());
    assert_eq!(
        min_energy_design(&bob.q, 2.0, 2.0 / top * 0.999).unwrap_err().kind(),
        "no-transmit"
    );
}

#[test]
fn multicast_blocking_conditions() {
    let mut rng = substream(402, 0);
    let bobs: Vec<Link> = (0..3).map(|_| Link::draw(&scenario(8), &mut rng).unwrap()).collect();
    let q_bs: Vec<_> = bobs.iter().map(|b| b.q.clone()).collect();
    let design = WaveformDesign {
        waveform: random_unit(&mut rng, 8),
        energy: 4.0,
        branch: DesignBranch::SdrRankOne,
    };
    let ad = an_pipeline_multicast(&q_bs, design.clone(), 100.0).unwrap();
    assert_eq!(ad.an.blocked_rank(), 3);
    assert_eq!(ad.an.basis().cols(), 5);
    for q in &q_bs {
        let v = q.matrix().mul_vec(&design.waveform);
        let leak = ad.an.matrix().mul_vec(&v);
        let scale = ad.an.per_dimension_energy() * v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        assert!(leak.iter().all(|x| x.norm() <= 1e-12 * scale));
    }
    assert!(rel(ad.an.matrix().trace(), 96.0) <= 1e-12);
}

#[test]
fn samples_are_orthogonal_to_blocked_direction() {
    let mut rng = substream(403, 0);
    let v = random_vector(&mut rng, 2);
    let an = an_covariance(&[v.clone()], 3.0, 2).unwrap();
    for _ in 0..1000 {
        let w = sample_an(&an, &mut rng);
        let scale = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() + 1.0;
        assert!(dot(&v, &w).norm() <= 1e-12 * scale);
    }
}

#[test]
fn sample_covariance_matches() {
    let mut rng = substream(404, 0);
    let blocking = vec![random_vector(&mut rng, 6), random_vector(&mut rng, 6)];
    let an = an_covariance(&blocking, 10.0, 6).unwrap();
    let mut acc = ComplexMatrix::zeros(6, 6);
    let n = 100_000;
    for _ in 0..n {
        acc.add_outer(1.0, &an.sample(&mut rng));
    }
    let sample = acc.scaled(1.0 / n as f64);
    let target = an.matrix().as_matrix();
    assert!(sample.sub(target).frobenius_norm() / target.frobenius_norm() <= 0.05);
}

#[test]
fn covariance_is_isotropic_on_complement() {
    let mut rng = substream(405, 0);
    for k in 1..=4 {
        let blocking: Vec<_> = (0..k).map(|_| random_vector(&mut rng, 8)).collect();
        let an = an_covariance(&blocking, 12.0, 8).unwrap();
        let values = hermitian_eig(an.matrix()).unwrap().values;
        let level = 12.0 / (8 - k) as f64;
        for (i, v) in values.iter().enumerate() {
            let expect = if i < 8 - k { level } else { 0.0 };
            assert!((v - expect).abs() <= 1e-12 * 12.0, "k={k} i={i}: {v}");
        }
    }
}

#[test]
fn rank_deficient_blocking_uses_true_rank() {
    let mut rng = substream(406, 0);
    let v = random_vector(&mut rng, 4);
    let twice: Vec<C64> = v.iter().map(|x| x * 2.0).collect();
    let an = an_covariance(&[v, twice], 6.0, 4).unwrap();
    assert_eq!(an.blocked_rank(), 1);
    assert!((an.per_dimension_energy() - 2.0).abs() <= 1e-14);
}

#[test]
fn single_receiver_zero_degradation() {
    let mut rng = substream(407, 0);
    for _ in 0..200 {
        let (bob, _) = links(&mut rng, 8);
        let gamma = 10f64.powf(rng.random_range(0.0..1.0));
        let ad = an_pipeline_single(&bob.q, gamma, 100.0).unwrap();
        let d = &ad.design;
        let with = sinr_with_an(
            bob.channel.matrix(),
            bob.disturbance.matrix(),
            ad.an.matrix(),
            &d.waveform,
            d.energy,
        )
        .unwrap();
        assert!(rel(with, bob.q.sinr(&d.waveform, d.energy)) <= 1e-9);
        assert!(rel(ad.an.matrix().trace(), 100.0 - d.energy) <= 1e-10);
    }
}

#[test]
fn multicast_zero_degradation() {
    let mut rng = substream(408, 0);
    for i in 0..100 {
        let k = 1 + i % 4;
        let bobs: Vec<Link> = (0..k).map(|_| Link::draw(&scenario(8), &mut rng).unwrap()).collect();
        let q_bs: Vec<_> = bobs.iter().map(|b| b.q.clone()).collect();
        let design = WaveformDesign {
            waveform: random_unit(&mut rng, 8),
            energy: rng.random_range(1.0..50.0),
            branch: DesignBranch::SdrRankOne,
        };
        let ad = an_pipeline_multicast(&q_bs, design.clone(), 100.0).unwrap();
        for b in &bobs {
            let with = sinr_with_an(
                b.channel.matrix(),
                b.disturbance.matrix(),
                ad.an.matrix(),
                &design.waveform,
                design.energy,
            )
            .unwrap();
            assert!(rel(with, b.q.sinr(&design.waveform, design.energy)) <= 1e-9);
        }
        assert!(rel(ad.an.matrix().trace(), 100.0 - design.energy) <= 1e-10);
    }
}

#[test]
fn an_degrades_eve() {
    let mut rng = substream(409, 0);
    let mut worse = 0;
    for _ in 0..50 {
        let (bob, eve) = links(&mut rng, 8);
        let ad = an_pipeline_single(&bob.q, 2.0, 100.0).unwrap();
        let d = &ad.design;
        let with =
            sinr_with_an(eve.channel.matrix(), eve.disturbance.matrix(), ad.an.matrix(), &d.waveform, d.energy).unwrap();
        let without = eve.q.sinr(&d.waveform, d.energy);
        assert!(with <= without * (1.0 + 1e-12));
        worse += (with < without * 0.99) as usize;
    }
    assert!(worse >= 45, "{worse}");
}
