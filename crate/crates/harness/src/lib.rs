//! Monte Carlo experiment driver for secure waveform design.
//!
//! A [`SweepSpec`] fixes the scenario, the transmission scheme and one swept
//! parameter. Every trial draws fresh receiver, eavesdropper and interferer
//! channels from its own substream of the master seed, applies the scheme
//! and records analytic post-filter SINRs (and, on request, simulated bit
//! errors). [`run_sweep`] aggregates the trials into a [`ResultTable`] that
//! [`emit_results`] writes as CSV.

pub mod config;
mod error;
pub mod report;
pub mod spec;
pub mod sweep;
pub mod table;
pub mod trial;

pub use config::{load_config, parse_config, FileConfig, Overrides, SCHEMA_VERSION};
pub use error::{HarnessError, Result};
pub use report::{design_report, DesignReport};
pub use spec::{DesignMode, EveAverage, Metric, SweepPoint, SweepSpec, SweepVariable};
pub use sweep::{estimate_ber, run_sweep, run_trials, tabulate};
pub use table::{aggregate, emit_results, read_csv, write_csv, ResultRow, ResultTable, CSV_HEADER};
pub use trial::{run_trial, BerCounts, TrialDesign, TrialRecord};
