//! Flat TOML experiment files. See `docs/config.md` for the schema.

use std::path::Path;

use serde::Deserialize;
use wavesec_core::channel::{InterfererModel, ScenarioConfig};

use crate::error::{HarnessError, Result};
use crate::spec::{DesignMode, EveAverage, Metric, SweepSpec, SweepVariable};

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk form. Every key except `schema_version` and `mode` is optional.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: u32,
    pub mode: DesignMode,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub noise_variance: Option<f64>,
    pub interferers_min: Option<usize>,
    pub interferers_max: Option<usize>,
    pub interferer_energy_min: Option<f64>,
    pub interferer_energy_max: Option<f64>,
    pub isi: Option<bool>,
    pub gamma_db: Option<f64>,
    pub e_max: Option<f64>,
    pub sweep: Option<SweepVariable>,
    pub sweep_values: Option<Vec<f64>>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_step: Option<f64>,
    pub metrics: Option<Vec<Metric>>,
    pub bits_per_trial: Option<usize>,
    pub eve_average: Option<EveAverage>,
    pub randomization_samples: Option<usize>,
    pub rank_tol: Option<f64>,
}

/// Command-line overrides, applied after the file is read.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub gamma_db: Option<f64>,
    pub l: Option<usize>,
    pub e_max: Option<f64>,
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<DesignMode>,
    pub eve_average: Option<EveAverage>,
}

pub fn parse_config(text: &str, origin: &Path) -> Result<FileConfig> {
    let cfg: FileConfig = toml::from_str(text).map_err(|e| HarnessError::Parse {
        path: origin.to_path_buf(),
        message: e.message().to_owned(),
    })?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(HarnessError::Config(format!(
            "schema_version {} is not supported (expected {SCHEMA_VERSION})",
            cfg.schema_version
        )));
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text, path)
}

/// `start, start + step, …` up to and including `stop`.
fn expand_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() {
        return Err(HarnessError::Config(format!(
            "sweep range {start}..={stop} step {step} is invalid"
        )));
    }
    if stop < start {
        return Err(HarnessError::Config(format!("sweep range {start}..={stop} is empty")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

impl FileConfig {
    /// Resolve defaults and overrides into a validated [`SweepSpec`].
    pub fn to_spec(&self, o: &Overrides) -> Result<SweepSpec> {
        let d = SweepSpec::default();
        let im = InterfererModel::default();
        let sc = ScenarioConfig::default();
        let scenario = ScenarioConfig {
            chips: o.l.or(self.l).unwrap_or(sc.chips),
            paths: self.m.unwrap_or(sc.paths),
            noise_variance: self.noise_variance.unwrap_or(sc.noise_variance),
            interferers: InterfererModel {
                count_min: self.interferers_min.unwrap_or(im.count_min),
                count_max: self.interferers_max.unwrap_or(im.count_max),
                energy_min: self.interferer_energy_min.unwrap_or(im.energy_min),
                energy_max: self.interferer_energy_max.unwrap_or(im.energy_max),
            },
            seed: o.seed.or(self.seed).unwrap_or(sc.seed),
            isi_enabled: self.isi.unwrap_or(sc.isi_enabled),
            trials: o.trials.or(self.trials).unwrap_or(sc.trials),
        };
        let gamma_db = o.gamma_db.or(self.gamma_db).unwrap_or(d.gamma_db);
        let e_max = o.e_max.or(self.e_max).unwrap_or(d.e_max);

        let range = [self.sweep_start, self.sweep_stop, self.sweep_step];
        let has_range = range.iter().any(Option::is_some);
        if has_range && self.sweep_values.is_some() {
            return Err(HarnessError::Config(
                "give either sweep_values or sweep_start/stop/step, not both".into(),
            ));
        }
        if (has_range || self.sweep_values.is_some()) && self.sweep.is_none() {
            return Err(HarnessError::Config("sweep values given without a sweep variable".into()));
        }
        let variable = self.sweep.unwrap_or(SweepVariable::GammaDb);
        let fixed = match variable {
            SweepVariable::GammaDb => gamma_db,
            SweepVariable::L => scenario.chips as f64,
            SweepVariable::EMax => e_max,
        };
        let overridden = match variable {
            SweepVariable::GammaDb => o.gamma_db.is_some(),
            SweepVariable::L => o.l.is_some(),
            SweepVariable::EMax => o.e_max.is_some(),
        };
        let values = if overridden || self.sweep.is_none() {
            vec![fixed]
        } else if let Some(v) = &self.sweep_values {
            v.clone()
        } else if let [Some(a), Some(b), Some(s)] = range {
            expand_range(a, b, s)?
        } else {
            return Err(HarnessError::Config(
                "sweep needs sweep_values or all of sweep_start, sweep_stop, sweep_step".into(),
            ));
        };

        let spec = SweepSpec {
            scenario,
            mode: o.mode.unwrap_or(self.mode),
            variable,
            values,
            gamma_db,
            e_max,
            receivers: o.k.or(self.k).unwrap_or(d.receivers),
            metrics: self.metrics.clone().unwrap_or(d.metrics),
            bits_per_trial: self.bits_per_trial.unwrap_or(d.bits_per_trial),
            eve_average: o.eve_average.or(self.eve_average).unwrap_or(d.eve_average),
            randomization_samples: self.randomization_samples.unwrap_or(d.randomization_samples),
            rank_tol: self.rank_tol.unwrap_or(d.rank_tol),
        };
        spec.validate()?;
        Ok(spec)
    }
}
