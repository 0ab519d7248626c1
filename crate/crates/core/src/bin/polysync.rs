use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polysync::circuits::{CircuitKind, ClockMode};
use polysync::harness::{self, SummaryRow, TrialConfig};
use polysync::{Error, Result};

/// Polysynchronous stochastic circuit simulator.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Baseline accuracy of the sync and poly arms against the software reference.
    Simulate(RunArgs),
    /// Error against soft-error injection rate.
    InjectSweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated flip rates in [0, 1].
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
    },
    /// Re-aggregate results CSV files into a plot table.
    Report {
        #[arg(long = "input", short, required = true)]
        inputs: Vec<PathBuf>,
        /// Directory for plot.csv; stdout only when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[arg(long)]
    circuit: Option<CircuitKind>,
    /// Input PGM for the single-frame circuits.
    #[arg(long)]
    image: Option<PathBuf>,
    /// Built-in input: ramp, checkerboard, noise, scene, halftone, video.
    #[arg(long)]
    synthetic: Option<String>,
    /// Side of the built-in input image.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bits per stream.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<ClockMode>>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip writing PGM images.
    #[arg(long)]
    no_images: bool,
    /// Any configuration key, e.g. `--set lfsr.width=12`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

impl RunArgs {
    fn config(&self) -> Result<TrialConfig> {
        let mut cfg = match &self.config {
            Some(p) => TrialConfig::load(p)?,
            None => TrialConfig::default(),
        };
        if let Some(k) = self.circuit {
            cfg.circuit.kind = k;
        }
        if let Some(p) = &self.image {
            cfg.input.image = Some(p.clone());
        }
        if let Some(s) = &self.synthetic {
            cfg.input.synthetic = Some(s.clone());
        }
        if let Some(n) = self.size {
            cfg.input.size = n;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.sng.master_seed = s;
        }
        if let Some(l) = self.length {
            cfg.stream.length = l;
        }
        if let Some(m) = &self.modes {
            cfg.modes = m.clone();
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        if self.no_images {
            cfg.output.images = false;
        }
        for kv in &self.sets {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }
}

fn print_summary(rows: &[SummaryRow]) {
    println!("{:<10} {:<5} {:>6} {:>7} {:>10} {:>10}", "circuit", "mode", "rate", "trials", "mean_err%", "stddev");
    for s in rows {
        println!(
            "{:<10} {:<5} {:>6.3} {:>7} {:>10.4} {:>10.4}",
            s.circuit.to_string(),
            s.mode.to_string(),
            s.rate,
            s.trials,
            s.mean_error_pct,
            s.stddev_error_pct
        );
    }
}

fn run(cfg: TrialConfig) -> Result<()> {
    let mut report = harness::run_experiment(&cfg)?;
    let dir = cfg.output.dir.clone();
    harness::report_emit(&mut report, &dir)?;
    print_summary(&report.summary);
    println!("wrote {}", dir.display());
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let mut cfg = args.config()?;
            cfg.faults.rates.clear();
            run(cfg)
        }
        Command::InjectSweep { run: args, rates } => {
            let mut cfg = args.config()?;
            if let Some(r) = rates {
                cfg.faults.rates = r;
            } else if cfg.faults.rates.is_empty() {
                cfg.faults.rates = vec![0.0, 0.05, 0.10, 0.20];
            }
            run(cfg)
        }
        Command::Report { inputs, out } => {
            let mut rows = Vec::new();
            for p in &inputs {
                rows.extend(harness::read_results(std::fs::File::open(p)?)?);
            }
            let summary = harness::summarize(&rows, None);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                harness::write_plot(&summary, std::fs::File::create(dir.join("plot.csv"))?)?;
            }
            print_summary(&summary);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
