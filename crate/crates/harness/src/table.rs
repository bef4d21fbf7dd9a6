use std::io::Write;
use std::path::Path;

use serde::Serialize;
use wavesec_core::to_db;

use crate::error::{HarnessError, Result};
use crate::spec::{EveAverage, SweepVariable};
use crate::trial::TrialRecord;

/// Radius multiplier for the reported confidence intervals (95 %).
pub const CI_Z: f64 = 1.96;

/// Output columns, in file order.
pub const CSV_HEADER: [&str; 16] = [
    "swept_value",
    "mean_sinr_eve_db",
    "ci_sinr_eve_db",
    "mean_sinr_bob_db",
    "ci_sinr_bob_db",
    "solvability",
    "ci_solvability",
    "an_fraction",
    "ci_an_fraction",
    "ber_bob",
    "ci_ber_bob",
    "ber_eve",
    "ci_ber_eve",
    "n_trials",
    "n_solvable",
    "n_failures",
];

/// Aggregates at one swept value. SINR, AN and BER columns cover solvable
/// trials only and are `None` when there are none (or BER was not run).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub swept_value: f64,
    pub mean_sinr_eve_db: Option<f64>,
    pub ci_sinr_eve_db: Option<f64>,
    pub mean_sinr_bob_db: Option<f64>,
    pub ci_sinr_bob_db: Option<f64>,
    pub solvability: f64,
    pub ci_solvability: f64,
    pub an_fraction: Option<f64>,
    pub ci_an_fraction: Option<f64>,
    pub ber_bob: Option<f64>,
    pub ci_ber_bob: Option<f64>,
    pub ber_eve: Option<f64>,
    pub ci_ber_eve: Option<f64>,
    pub n_trials: u64,
    pub n_solvable: u64,
    /// Trials abandoned by a solver, included in `n_trials − n_solvable`.
    pub n_failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultTable {
    pub variable: SweepVariable,
    pub rows: Vec<ResultRow>,
}

/// Sample mean and standard error; the error is `None` below two samples.
fn mean_se(xs: &[f64]) -> Option<(f64, Option<f64>)> {
    let n = xs.len();
    if n == 0 {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Some((mean, None));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some((mean, Some((var / n as f64).sqrt())))
}

/// Mean SINR in dB and its confidence radius in dB.
fn sinr_db(xs: &[f64], avg: EveAverage) -> (Option<f64>, Option<f64>) {
    match avg {
        EveAverage::Linear => match mean_se(xs) {
            // Delta method: d(10 log10 x) = 10/(x ln 10) dx.
            Some((m, se)) => (
                Some(to_db(m)),
                se.map(|se| CI_Z * 10.0 / core::f64::consts::LN_10 * se / m),
            ),
            None => (None, None),
        },
        EveAverage::Db => {
            let db: Vec<f64> = xs.iter().map(|x| to_db(*x)).collect();
            match mean_se(&db) {
                Some((m, se)) => (Some(m), se.map(|se| CI_Z * se)),
                None => (None, None),
            }
        }
    }
}

fn binomial(successes: u64, n: u64) -> (f64, f64) {
    let p = successes as f64 / n as f64;
    (p, CI_Z * (p * (1.0 - p) / n as f64).sqrt())
}

/// Aggregate the trials of one swept value.
pub fn aggregate(swept_value: f64, trials: &[TrialRecord], e_max: f64, avg: EveAverage) -> ResultRow {
    let n = trials.len() as u64;
    let designs: Vec<_> = trials.iter().filter_map(|t| t.design.as_ref()).collect();
    let n_solvable = designs.len() as u64;
    let eve: Vec<f64> = designs.iter().map(|d| d.sinr_eve).collect();
    let bob: Vec<f64> = designs.iter().flat_map(|d| d.sinr_bob.iter().copied()).collect();
    let an: Vec<f64> = designs.iter().map(|d| d.an_energy / e_max).collect();
    let (mean_sinr_eve_db, ci_sinr_eve_db) = sinr_db(&eve, avg);
    let (mean_sinr_bob_db, ci_sinr_bob_db) = sinr_db(&bob, avg);
    let an_stats = mean_se(&an);
    let (solvability, ci_solvability) = binomial(n_solvable, n);

    let counts: Vec<_> = designs.iter().filter_map(|d| d.ber.as_ref()).collect();
    let (mut ber_bob, mut ci_ber_bob, mut ber_eve, mut ci_ber_eve) = (None, None, None, None);
    if !counts.is_empty() {
        let bob_bits: u64 = counts.iter().map(|c| c.bits * c.receivers).sum();
        let eve_bits: u64 = counts.iter().map(|c| c.bits).sum();
        let (pb, rb) = binomial(counts.iter().map(|c| c.bob_errors).sum(), bob_bits);
        let (pe, re) = binomial(counts.iter().map(|c| c.eve_errors).sum(), eve_bits);
        (ber_bob, ci_ber_bob, ber_eve, ci_ber_eve) = (Some(pb), Some(rb), Some(pe), Some(re));
    }

    ResultRow {
        swept_value,
        mean_sinr_eve_db,
        ci_sinr_eve_db,
        mean_sinr_bob_db,
        ci_sinr_bob_db,
        solvability,
        ci_solvability,
        an_fraction: an_stats.map(|(m, _)| m),
        ci_an_fraction: an_stats.and_then(|(_, se)| se.map(|se| CI_Z * se)),
        ber_bob,
        ci_ber_bob,
        ber_eve,
        ci_ber_eve,
        n_trials: n,
        n_solvable,
        n_failures: trials.iter().filter(|t| t.failure.is_some()).count() as u64,
    }
}

/// Nine significant digits; empty for a missing value.
fn fmt_num(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.8e}"))
}

impl ResultRow {
    fn fields(&self) -> Vec<String> {
        vec![
            fmt_num(Some(self.swept_value)),
            fmt_num(self.mean_sinr_eve_db),
            fmt_num(self.ci_sinr_eve_db),
            fmt_num(self.mean_sinr_bob_db),
            fmt_num(self.ci_sinr_bob_db),
            fmt_num(Some(self.solvability)),
            fmt_num(Some(self.ci_solvability)),
            fmt_num(self.an_fraction),
            fmt_num(self.ci_an_fraction),
            fmt_num(self.ber_bob),
            fmt_num(self.ci_ber_bob),
            fmt_num(self.ber_eve),
            fmt_num(self.ci_ber_eve),
            self.n_trials.to_string(),
            self.n_solvable.to_string(),
            self.n_failures.to_string(),
        ]
    }
}

/// Render `table` as CSV into `out`.
pub fn write_csv<W: Write>(table: &ResultTable, out: W) -> Result<()> {
    if table.rows.is_empty() {
        return Err(HarnessError::Config("result table is empty".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &table.rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
    Ok(())
}

/// Write `table` to `path` as CSV.
pub fn emit_results(table: &ResultTable, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(table, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| HarnessError::io(path, e))
}

/// Parse CSV written by [`write_csv`] back into rows.
pub fn read_csv<R: std::io::Read>(input: R, variable: SweepVariable) -> Result<ResultTable> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(HarnessError::Config(format!("unexpected CSV header {header:?}")));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            return Ok(None);
        }
        s.parse()
            .map(Some)
            .map_err(|_| HarnessError::Config(format!("bad number {s:?}")))
    };
    let int = |s: &str| -> Result<u64> { s.parse().map_err(|_| HarnessError::Config(format!("bad count {s:?}"))) };
    let required = |s: &str| -> Result<f64> { num(s)?.ok_or_else(|| HarnessError::Config("missing value".into())) };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        rows.push(ResultRow {
            swept_value: required(f(0))?,
            mean_sinr_eve_db: num(f(1))?,
            ci_sinr_eve_db: num(f(2))?,
            mean_sinr_bob_db: num(f(3))?,
            ci_sinr_bob_db: num(f(4))?,
            solvability: required(f(5))?,
            ci_solvability: required(f(6))?,
            an_fraction: num(f(7))?,
            ci_an_fraction: num(f(8))?,
            ber_bob: num(f(9))?,
            ci_ber_bob: num(f(10))?,
            ber_eve: num(f(11))?,
            ci_ber_eve: num(f(12))?,
            n_trials: int(f(13))?,
            n_solvable: int(f(14))?,
            n_failures: int(f(15))?,
        });
    }
    Ok(ResultTable { variable, rows })
}
