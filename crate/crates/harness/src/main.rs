use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wavesec::{
    design_report, emit_results, estimate_ber, load_config, run_sweep, write_csv, EveAverage,
    HarnessError, Metric, Overrides, ResultTable, SweepSpec,
};

#[derive(Parser)]
#[command(name = "wavesec", version, about = "Secure waveform design experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design one single-receiver trial and print it as JSON.
    DesignP2p(DesignArgs),
    /// Design one multicast trial and print it as JSON.
    DesignMulticast(DesignArgs),
    /// Sweep with simulated uncoded BER and write CSV.
    SimulateBer(Common),
    /// Run a sweep and write CSV.
    Sweep(Common),
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    common: Common,
    /// Trial index (substream) to design.
    #[arg(long, default_value_t = 0)]
    trial: usize,
}

#[derive(Args)]
struct Common {
    /// Experiment file (flat TOML).
    config: PathBuf,
    #[arg(long = "gamma-db", allow_negative_numbers = true)]
    gamma_db: Option<f64>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    emax: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    /// `linear` or `db`.
    #[arg(long = "eve-average")]
    eve_average: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn spec(&self) -> wavesec::Result<SweepSpec> {
        let o = Overrides {
            gamma_db: self.gamma_db,
            l: self.l,
            e_max: self.emax,
            k: self.k,
            trials: self.trials,
            seed: self.seed,
            mode: self.mode.as_deref().map(str::parse).transpose()?,
            eve_average: self.eve_average.as_deref().map(str::parse::<EveAverage>).transpose()?,
        };
        load_config(&self.config)?.to_spec(&o)
    }

    fn write_table(&self, table: &ResultTable) -> wavesec::Result<()> {
        match &self.out {
            Some(path) => emit_results(table, path),
            None => write_csv(table, std::io::stdout().lock()),
        }
    }

    fn write_text(&self, text: &str) -> wavesec::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| HarnessError::Io {
                path: path.clone(),
                source: e,
            }),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())
                    .map_err(|e| HarnessError::Io {
                        path: "<stdout>".into(),
                        source: e,
                    })
            }
        }
    }
}

fn design(args: &DesignArgs, multicast: bool) -> wavesec::Result<()> {
    let spec = args.common.spec()?;
    if spec.mode.is_single_receiver() == multicast {
        let want = if multicast { "a multicast" } else { "a single-receiver" };
        return Err(HarnessError::Config(format!("{} is not {want} mode", spec.mode)));
    }
    let report = design_report(&spec, args.trial)?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    args.common.write_text(&text)
}

fn run(cli: &Cli) -> wavesec::Result<()> {
    match &cli.command {
        Command::DesignP2p(a) => design(a, false),
        Command::DesignMulticast(a) => design(a, true),
        Command::SimulateBer(c) => {
            let spec = c.spec()?;
            c.write_table(&estimate_ber(&spec, spec.bits_per_trial)?)
        }
        Command::Sweep(c) => {
            let spec = c.spec()?;
            let table = if spec.wants(Metric::Ber) {
                estimate_ber(&spec, spec.bits_per_trial)?
            } else {
                run_sweep(&spec)?
            };
            c.write_table(&table)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::from(if matches!(e, HarnessError::Config(_) | HarnessError::Parse { .. }) {
                2
            } else {
                1
            })
        }
    }
}
