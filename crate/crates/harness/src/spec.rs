use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wavesec_core::channel::ScenarioConfig;
use wavesec_core::from_db;
use wavesec_core::sdr::{DEFAULT_RANDOMIZATION_SAMPLES, DEFAULT_RANK_TOL};

use crate::error::{HarnessError, Result};

/// Transmission scheme applied in every trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignMode {
    /// Generalized eigenwaveform against an eavesdropper of known CSI.
    EigenKnownCsi,
    /// Minimum-energy waveform plus artificial noise, Eve's CSI unknown.
    AnUnknownCsi,
    /// Minimum-energy waveform, no artificial noise (reference).
    MinEnergyNoAn,
    /// SDR multicast design minimizing Eve's SINR.
    MulticastSdr,
    /// SDR multicast design minimizing energy, rest of the budget to AN.
    MulticastMinEnergyAn,
    /// Point-to-point design against the summed receiver `Q`.
    SumSinr,
}

impl DesignMode {
    pub const ALL: [DesignMode; 6] = [
        DesignMode::EigenKnownCsi,
        DesignMode::AnUnknownCsi,
        DesignMode::MinEnergyNoAn,
        DesignMode::MulticastSdr,
        DesignMode::MulticastMinEnergyAn,
        DesignMode::SumSinr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DesignMode::EigenKnownCsi => "eigen-known-csi",
            DesignMode::AnUnknownCsi => "an-unknown-csi",
            DesignMode::MinEnergyNoAn => "min-energy-no-an",
            DesignMode::MulticastSdr => "multicast-sdr",
            DesignMode::MulticastMinEnergyAn => "multicast-min-energy-an",
            DesignMode::SumSinr => "sum-sinr",
        }
    }

    /// Modes that serve a single receiver.
    pub fn is_single_receiver(self) -> bool {
        matches!(
            self,
            DesignMode::EigenKnownCsi | DesignMode::AnUnknownCsi | DesignMode::MinEnergyNoAn
        )
    }

    pub fn uses_an(self) -> bool {
        matches!(self, DesignMode::AnUnknownCsi | DesignMode::MulticastMinEnergyAn)
    }
}

impl fmt::Display for DesignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DesignMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        DesignMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown mode {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Bob's SINR target in dB.
    GammaDb,
    /// Waveform length `L`.
    L,
    /// Energy budget per bit.
    EMax,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::GammaDb => "gamma_db",
            SweepVariable::L => "l",
            SweepVariable::EMax => "e_max",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Sinr,
    Ber,
}

/// How per-trial SINRs are averaged into the reported dB value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveAverage {
    /// Mean of linear SINRs, then dB. Dominated by the occasional trial in
    /// which Eve's channel happens to be strong.
    Linear,
    /// Mean of per-trial dB values.
    #[default]
    Db,
}

impl FromStr for EveAverage {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(EveAverage::Linear),
            "db" => Ok(EveAverage::Db),
            _ => Err(HarnessError::Config(format!("eve average must be linear or db, got {s:?}"))),
        }
    }
}

/// A full experiment: scenario, scheme and one swept parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Base scenario. `chips` is replaced by the swept value when sweeping `L`.
    pub scenario: ScenarioConfig,
    pub mode: DesignMode,
    pub variable: SweepVariable,
    /// Strictly increasing swept values.
    pub values: Vec<f64>,
    /// Fixed target when `γ` is not swept.
    pub gamma_db: f64,
    /// Fixed budget when `E_max` is not swept.
    pub e_max: f64,
    /// `K`, number of legitimate receivers.
    pub receivers: usize,
    pub metrics: Vec<Metric>,
    pub bits_per_trial: usize,
    pub eve_average: EveAverage,
    pub randomization_samples: usize,
    pub rank_tol: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            scenario: ScenarioConfig::default(),
            mode: DesignMode::EigenKnownCsi,
            variable: SweepVariable::GammaDb,
            values: (0..=10).map(f64::from).collect(),
            gamma_db: 6.0,
            e_max: 100.0,
            receivers: 1,
            metrics: vec![Metric::Sinr],
            bits_per_trial: 10_000,
            eve_average: EveAverage::Db,
            randomization_samples: DEFAULT_RANDOMIZATION_SAMPLES,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// Parameters of one point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub scenario: ScenarioConfig,
    /// Linear SINR target.
    pub gamma: f64,
    pub e_max: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.values.is_empty() {
            return bad("sweep has no values".into());
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return bad("sweep values must be finite".into());
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sweep values must be strictly increasing".into());
        }
        if self.receivers == 0 {
            return bad("k must be at least 1".into());
        }
        if self.mode.is_single_receiver() && self.receivers != 1 {
            return bad(format!("mode {} serves one receiver, got k = {}", self.mode, self.receivers));
        }
        if self.metrics.is_empty() {
            return bad("no metrics requested".into());
        }
        if self.metrics.contains(&Metric::Ber) && self.bits_per_trial < 1000 {
            return bad(format!("bits_per_trial must be at least 1000, got {}", self.bits_per_trial));
        }
        if self.randomization_samples == 0 {
            return bad("randomization_samples must be positive".into());
        }
        if !(self.rank_tol > 0.0) {
            return bad(format!("rank_tol must be positive, got {}", self.rank_tol));
        }
        for i in 0..self.values.len() {
            let p = self.point(i);
            p.scenario.validate()?;
            if !(p.gamma > 0.0) || !p.gamma.is_finite() {
                return bad(format!("gamma_db {} is out of range", p.value));
            }
            if !(p.e_max > 0.0) || !p.e_max.is_finite() {
                return bad(format!("e_max must be positive, got {}", p.e_max));
            }
        }
        if self.variable == SweepVariable::L && self.values.iter().any(|v| v.fract() != 0.0) {
            return bad("swept L values must be integers".into());
        }
        Ok(())
    }

    /// Scenario and targets at sweep index `i`.
    pub fn point(&self, i: usize) -> SweepPoint {
        let value = self.values[i];
        let mut scenario = self.scenario.clone();
        let mut gamma_db = self.gamma_db;
        let mut e_max = self.e_max;
        match self.variable {
            SweepVariable::GammaDb => gamma_db = value,
            SweepVariable::L => scenario.chips = value as usize,
            SweepVariable::EMax => e_max = value,
        }
        SweepPoint {
            value,
            scenario,
            gamma: from_db(gamma_db),
            e_max,
        }
    }

    pub fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }
}
