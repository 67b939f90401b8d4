use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vet_core::ControllerMode;
use vet_sim::{cmd_compare, cmd_plot, cmd_run, CliError, ConfigSource, PlotKind};

#[derive(Parser)]
#[command(name = "vet-sim", version, about = "Virtual elastic tether simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write CSV, summary, config echo and plots.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Run a scenario under both controllers with the same seed.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Render a figure from a trajectory CSV.
    Plot {
        csv: PathBuf,
        #[arg(long, default_value = "distance_vs_time")]
        kind: String,
        /// Draw a dashed threshold line on the distance plot.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "VET_SIM_OUT", default_value = "vet-sim-out")]
    out: PathBuf,
    /// Override a configuration value, e.g. `--set vet.k_psi=0.3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Vet,
    Baseline,
}

impl From<Mode> for ControllerMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Vet => ControllerMode::Vet,
            Mode::Baseline => ControllerMode::Baseline,
        }
    }
}

impl ScenarioArgs {
    fn source(&self, mode: Option<Mode>) -> ConfigSource<'_> {
        ConfigSource {
            preset: self.preset.as_deref(),
            file: self.config.as_deref(),
            overrides: &self.overrides,
            mode: mode.map(Into::into),
            seed: self.seed,
        }
    }
}

fn show(p: &Path) {
    println!("{}", p.display());
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { scenario, mode } => {
            let b = cmd_run(&scenario.source(mode), &scenario.out)?;
            show(&b.trajectory_csv);
            show(&b.summary_json);
            show(&b.config_echo);
            b.plots.iter().for_each(|p| show(p));
        }
        Command::Compare { scenario } => {
            let b = cmd_compare(&scenario.source(None), &scenario.out)?;
            show(&b.compare_json);
            show(&b.distance_plot);
            show(&b.vet.summary_json);
            show(&b.baseline.summary_json);
        }
        Command::Plot {
            csv,
            kind,
            threshold,
            out,
        } => {
            let kind: PlotKind = kind.parse()?;
            show(&cmd_plot(&csv, kind, threshold, out.as_deref())?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vet-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
