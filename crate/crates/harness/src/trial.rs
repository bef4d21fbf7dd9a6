use std::time::{Duration, Instant};

use serde::Serialize;
use wavesec_core::an::{an_pipeline_multicast, an_pipeline_single, min_energy_design, AnCovariance};
use wavesec_core::channel::{detect, receive, transmit_chips, Link};
use wavesec_core::kernel::hermitian_eig;
use wavesec_core::p2p::{design_p2p, DesignBranch, P2pProblem, WaveformDesign};
use wavesec_core::rng::{antipodal, substream, StreamRng};
use wavesec_core::sdr::{multicast_design, sum_sinr_design, Mode, MulticastProblem};
use wavesec_core::Error;

use crate::error::Result;
use crate::spec::{DesignMode, Metric, SweepPoint, SweepSpec};

/// Outcome of one channel realization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Substream id the trial drew from.
    pub stream: u64,
    pub solvable: bool,
    /// `λ_max(Q_b) ≥ γ/E_max` for single-receiver modes.
    pub threshold_met: Option<bool>,
    /// Present iff `solvable`.
    pub design: Option<TrialDesign>,
    /// Why a solver gave up, when it did (counted as unsolvable).
    pub failure: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialDesign {
    /// Achieved SINR per receiver, with AN when present.
    pub sinr_bob: Vec<f64>,
    pub sinr_eve: f64,
    pub energy: f64,
    pub an_energy: f64,
    pub branch: &'static str,
    pub ber: Option<BerCounts>,
}

/// Raw error counts of one trial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BerCounts {
    pub bits: u64,
    /// Summed over receivers, so `bob_errors / (bits · K)` is Bob's BER.
    pub bob_errors: u64,
    pub receivers: u64,
    pub eve_errors: u64,
}

/// Links, design and AN of a solvable trial.
#[derive(Clone, Debug)]
pub struct Designed {
    pub bobs: Vec<Link>,
    pub eve: Link,
    pub design: WaveformDesign,
    pub an: Option<AnCovariance>,
}

/// Stream id of trial `t`. Every sweep point and every mode draws trial `t`
/// from the same stream, so curves are compared on common channels.
pub fn trial_stream(t: usize) -> u64 {
    t as u64
}

/// Draw the trial's links (receivers first, then Eve) and apply the mode.
pub fn run_trial(spec: &SweepSpec, point: &SweepPoint, t: usize) -> Result<(TrialRecord, Option<Designed>)> {
    let start = Instant::now();
    let stream = trial_stream(t);
    let mut rng = substream(point.scenario.seed, stream);
    let bobs = (0..spec.receivers)
        .map(|_| Link::draw(&point.scenario, &mut rng))
        .collect::<wavesec_core::Result<Vec<_>>>()?;
    let eve = Link::draw(&point.scenario, &mut rng)?;

    let threshold_met = if spec.mode.is_single_receiver() {
        Some(hermitian_eig(bobs[0].q.matrix())?.values[0] >= point.gamma / point.e_max)
    } else {
        None
    };

    let designed = match design(spec, point, &bobs, &eve, &mut rng) {
        Ok((design, an)) => Some(Designed { bobs, eve, design, an }),
        Err(Error::NoTransmit(_)) => None,
        Err(e @ (Error::Bisection { .. } | Error::SdpNotConverged { .. })) => {
            return Ok((
                TrialRecord {
                    stream,
                    solvable: false,
                    threshold_met,
                    design: None,
                    failure: Some(e.to_string()),
                    elapsed: start.elapsed(),
                },
                None,
            ));
        }
        Err(e) => return Err(e.into()),
    };

    let record_design = match &designed {
        Some(d) => Some(evaluate(spec, point, d, &mut rng)?),
        None => None,
    };
    Ok((
        TrialRecord {
            stream,
            solvable: designed.is_some(),
            threshold_met,
            design: record_design,
            failure: None,
            elapsed: start.elapsed(),
        },
        designed,
    ))
}

fn design(
    spec: &SweepSpec,
    point: &SweepPoint,
    bobs: &[Link],
    eve: &Link,
    rng: &mut StreamRng,
) -> wavesec_core::Result<(WaveformDesign, Option<AnCovariance>)> {
    let (gamma, e_max) = (point.gamma, point.e_max);
    let multicast = |with_eve: bool| {
        let mut p = MulticastProblem::new(
            bobs.iter().map(|b| b.q.clone()).collect(),
            with_eve.then(|| eve.q.clone()),
            vec![gamma; bobs.len()],
            e_max,
        )?;
        p.samples = spec.randomization_samples;
        p.rank_tol = spec.rank_tol;
        wavesec_core::Result::Ok(p)
    };
    match spec.mode {
        DesignMode::EigenKnownCsi => {
            let p = P2pProblem::new(bobs[0].q.clone(), eve.q.clone(), gamma, e_max)?;
            Ok((design_p2p(&p)?, None))
        }
        DesignMode::AnUnknownCsi => {
            let ad = an_pipeline_single(&bobs[0].q, gamma, e_max)?;
            Ok((ad.design, Some(ad.an)))
        }
        DesignMode::MinEnergyNoAn => Ok((min_energy_design(&bobs[0].q, gamma, e_max)?, None)),
        DesignMode::MulticastSdr => {
            let p = multicast(true)?;
            Ok((multicast_design(&p, Mode::MinEve, rng)?.design, None))
        }
        DesignMode::MulticastMinEnergyAn => {
            let p = multicast(false)?;
            let d = multicast_design(&p, Mode::MinEnergy, rng)?.design;
            let q_bs: Vec<_> = bobs.iter().map(|b| b.q.clone()).collect();
            let ad = an_pipeline_multicast(&q_bs, d, e_max)?;
            Ok((ad.design, Some(ad.an)))
        }
        DesignMode::SumSinr => {
            let q_bs: Vec<_> = bobs.iter().map(|b| b.q.clone()).collect();
            Ok((sum_sinr_design(&q_bs, &eve.q, gamma, e_max)?, None))
        }
    }
}

fn branch_name(b: DesignBranch, an: bool) -> &'static str {
    match (b, an) {
        (DesignBranch::MinEnergy, true) => "min-energy+an",
        (DesignBranch::SdrRankOne, true) => "sdr-rank-one+an",
        (DesignBranch::SdrRandomized, true) => "sdr-randomized+an",
        _ => b.as_str(),
    }
}

/// Analytic post-filter SINRs, plus simulated error counts when BER is
/// requested.
fn evaluate(spec: &SweepSpec, point: &SweepPoint, d: &Designed, rng: &mut StreamRng) -> Result<TrialDesign> {
    let s = &d.design.waveform;
    let energy = d.design.energy;
    let sinr = |link: &Link| -> wavesec_core::Result<f64> {
        match &d.an {
            Some(an) => link.sinr_with_an(an.matrix(), s, energy),
            None => Ok(link.q.sinr(s, energy)),
        }
    };
    let sinr_bob = d.bobs.iter().map(sinr).collect::<wavesec_core::Result<Vec<_>>>()?;
    let sinr_eve = sinr(&d.eve)?;
    let ber = if spec.wants(Metric::Ber) {
        Some(simulate_errors(d, spec.bits_per_trial, point.scenario.isi_enabled, rng)?)
    } else {
        None
    };
    Ok(TrialDesign {
        sinr_bob,
        sinr_eve,
        energy,
        an_energy: d.an.as_ref().map_or(0.0, |a| a.budget()),
        branch: branch_name(d.design.branch, d.an.is_some()),
        ber,
    })
}

/// Send `bits` random bits once; every receiver sees the same transmitted
/// chips (same AN realization) through its own channel and disturbance and
/// detects with its max-SINR filter. Eve's filter knows `R_w`.
pub fn simulate_errors(d: &Designed, bits: usize, isi: bool, rng: &mut StreamRng) -> Result<BerCounts> {
    let b: Vec<f64> = (0..bits).map(|_| antipodal(rng)).collect();
    let tx = transmit_chips(&d.design, &b, d.an.as_ref(), rng)?;
    let rw = d.an.as_ref().map(|a| a.matrix());
    let count = |link: &Link, rng: &mut StreamRng| -> Result<u64> {
        let filter = link.filter(&d.design.waveform, rw)?;
        let ys = receive(&link.channel, &link.disturbance, &tx, isi, rng)?;
        Ok(ys.iter().zip(&b).filter(|(y, bit)| detect(&filter, y) != **bit).count() as u64)
    };
    let mut bob_errors = 0;
    for link in &d.bobs {
        bob_errors += count(link, rng)?;
    }
    let eve_errors = count(&d.eve, rng)?;
    Ok(BerCounts {
        bits: bits as u64,
        bob_errors,
        receivers: d.bobs.len() as u64,
        eve_errors,
    })
}
