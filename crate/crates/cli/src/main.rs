//! `ionwire`: batch front-end for the ion-wire coupling toolkit.
//!
//! Exit codes: 0 success, 1 bad input (config, grid, data file, flags),
//! 2 a library computation failed.

mod commands;
mod output;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use ionwire::feasibility::GridSpec;
use ionwire::heating;

use commands::{SimMode, SimSpec};
use output::{Format, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "ionwire", version, about = "Feasibility analysis for wire-coupled trapped ions")]
struct Cli {
    /// TOML config with [ion], [trap], [coupler], [heating] and [criteria] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output files and manifest.json here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Seed for the Monte-Carlo shot-noise estimate (analyze only).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// f_min,f_max,d_min,d_max,nf,nd in Hz and m.
    #[arg(long, global = true)]
    grid: Option<GridArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coupling, signal/noise budget, heating and both criteria at the configured point.
    Analyze,
    /// Coupling versus disk radius at the configured distance.
    Optimize {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Criterion map and contours over a frequency/distance grid.
    Feasibility,
    /// Coupling of the seven coupler systems.
    Compare,
    /// Classical or RWA exchange dynamics.
    Simulate {
        #[arg(long, value_enum, default_value = "quantum")]
        mode: SimMode,
        /// Coupling in N/m; defaults to the configured pickup-disk coupling.
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long, default_value_t = 1)]
        quanta: u32,
        /// Run length in exchange times.
        #[arg(long, default_value_t = 1.5)]
        exchange_times: f64,
        /// Steps per exchange time (quantum) or per trap period (classical).
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Frequency of ion 2 over that of ion 1.
        #[arg(long, default_value_t = 1.0)]
        detuning_ratio: f64,
    },
    /// Prefactor Ã per heating-rate measurement plus per-material means.
    ExtractHeating {
        /// Measurement CSV (f_Hz,d_m,T_K,rate_quanta_per_s,material); bundled table if omitted.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Optimize { .. } => "optimize",
            Command::Feasibility => "feasibility",
            Command::Compare => "compare",
            Command::Simulate { .. } => "simulate",
            Command::ExtractHeating { .. } => "extract-heating",
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct GridArg(GridSpec);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [f0, f1, d0, d1, nf, nd] = parts[..] else {
            return Err("expected f_min,f_max,d_min,d_max,nf,nd".into());
        };
        let float = |v: &str| v.parse::<f64>().map_err(|e| format!("{v}: {e}"));
        let count = |v: &str| v.parse::<usize>().map_err(|e| format!("{v}: {e}"));
        GridSpec::new(float(f0)?, float(f1)?, float(d0)?, float(d1)?, count(nf)?, count(nd)?)
            .map(GridArg)
            .map_err(|e| e.to_string())
    }
}

enum Failure {
    Input(String),
    Compute(ionwire::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Compute(e) => write!(f, "computation error: {e}"),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Compute(_) => 2,
        }
    }
}

/// Canonical form of the options that shape the output, for the manifest hash.
fn invocation(cli: &Cli) -> String {
    let grid = cli.grid.map(|g| format!("{:?}", g.0)).unwrap_or_default();
    format!(
        "{:?} format={:?} seed={:?} grid={grid}",
        cli.command, cli.format, cli.seed
    )
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::Input("--config is required".into()))?;
    let raw = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&raw).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let cfg = ionwire::load_config(text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;

    let artifacts = match &cli.command {
        Command::Analyze => commands::analyze(&cfg, cli.format, cli.seed),
        Command::Optimize { samples } => commands::optimize(&cfg, cli.format, *samples),
        Command::Feasibility => {
            let grid = cli.grid.map(|g| g.0).unwrap_or_default();
            commands::feasibility(&cfg, cli.format, &grid)
        }
        Command::Compare => commands::compare(&cfg, cli.format),
        Command::Simulate {
            mode,
            gamma,
            quanta,
            exchange_times,
            steps,
            detuning_ratio,
        } => {
            let spec = SimSpec {
                mode: *mode,
                gamma: *gamma,
                quanta: *quanta,
                exchange_times: *exchange_times,
                steps: *steps,
                detuning_ratio: *detuning_ratio,
            };
            commands::simulate(&cfg, cli.format, &spec)
        }
        Command::ExtractHeating { data } => {
            let rows = match data {
                Some(p) => {
                    let file = std::fs::File::open(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                    heating::read_measurements(file).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
                }
                None => heating::bundled_measurements(),
            };
            commands::extract_heating(&cfg, cli.format, &rows)
        }
    }
    .map_err(Failure::Compute)?;

    match &cli.out {
        Some(dir) => {
            let manifest = RunManifest::new(cli.command.name(), &invocation(cli), &raw, &artifacts);
            output::write_all(dir, &artifacts, &manifest)
                .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(output::render_stdout(&artifacts).as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Failure::Input(format!("stdout: {e}")));
                }
                _ => {}
            }
        }
    }
    Ok(())
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
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ionwire: {f}");
            ExitCode::from(f.code())
        }
    }
}
