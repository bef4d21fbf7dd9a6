use serde::Serialize;
use wavesec_core::to_db;

use crate::error::Result;
use crate::spec::SweepSpec;
use crate::trial::run_trial;

/// One designed trial, as printed by the `design-*` subcommands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignReport {
    pub mode: &'static str,
    pub seed: u64,
    pub trial: usize,
    pub l: usize,
    pub k: usize,
    pub gamma_db: f64,
    pub e_max: f64,
    pub solvable: bool,
    pub branch: Option<&'static str>,
    pub energy: Option<f64>,
    pub an_energy: Option<f64>,
    /// `[re, im]` per chip.
    pub waveform: Option<Vec<[f64; 2]>>,
    pub sinr_bob_db: Option<Vec<f64>>,
    pub sinr_eve_db: Option<f64>,
    pub failure: Option<String>,
}

/// Design for trial `trial` at the first sweep point of `spec`.
pub fn design_report(spec: &SweepSpec, trial: usize) -> Result<DesignReport> {
    spec.validate()?;
    let point = spec.point(0);
    let (rec, designed) = run_trial(spec, &point, trial)?;
    let d = rec.design.as_ref();
    Ok(DesignReport {
        mode: spec.mode.as_str(),
        seed: point.scenario.seed,
        trial,
        l: point.scenario.chips,
        k: spec.receivers,
        gamma_db: to_db(point.gamma),
        e_max: point.e_max,
        solvable: rec.solvable,
        branch: d.map(|d| d.branch),
        energy: d.map(|d| d.energy),
        an_energy: d.map(|d| d.an_energy),
        waveform: designed.map(|x| x.design.waveform.iter().map(|c| [c.re, c.im]).collect()),
        sinr_bob_db: d.map(|d| d.sinr_bob.iter().map(|s| to_db(*s)).collect()),
        sinr_eve_db: d.map(|d| to_db(d.sinr_eve)),
        failure: rec.failure,
    })
}
