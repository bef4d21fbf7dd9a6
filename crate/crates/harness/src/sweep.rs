use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::spec::{Metric, SweepSpec};
use crate::table::{aggregate, ResultTable};
use crate::trial::{run_trial, TrialRecord};

/// Per-trial records of every sweep point, in sweep then trial order.
pub fn run_trials(spec: &SweepSpec) -> Result<Vec<Vec<TrialRecord>>> {
    spec.validate()?;
    (0..spec.values.len())
        .map(|i| {
            let point = spec.point(i);
            (0..point.scenario.trials)
                .into_par_iter()
                .map(|t| run_trial(spec, &point, t).map(|(rec, _)| rec))
                .collect()
        })
        .collect()
}

/// Aggregate [`run_trials`] into one row per swept value. Trials run in
/// parallel; aggregation walks them in trial order, so the result does not
/// depend on scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    let records = run_trials(spec)?;
    Ok(tabulate(spec, &records))
}

pub fn tabulate(spec: &SweepSpec, records: &[Vec<TrialRecord>]) -> ResultTable {
    let rows = records
        .iter()
        .enumerate()
        .map(|(i, recs)| {
            let point = spec.point(i);
            aggregate(point.value, recs, point.e_max, spec.eve_average)
        })
        .collect();
    ResultTable {
        variable: spec.variable,
        rows,
    }
}

/// [`run_sweep`] with simulated uncoded BER columns.
pub fn estimate_ber(spec: &SweepSpec, bits_per_trial: usize) -> Result<ResultTable> {
    if bits_per_trial < 1000 {
        return Err(HarnessError::Config(format!(
            "bits_per_trial must be at least 1000, got {bits_per_trial}"
        )));
    }
    let mut spec = spec.clone();
    spec.bits_per_trial = bits_per_trial;
    if !spec.wants(Metric::Ber) {
        spec.metrics.push(Metric::Ber);
    }
    run_sweep(&spec)
}
