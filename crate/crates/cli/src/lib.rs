//! Library side of the `vet-sim` binary: configuration resolution, scenario
//! execution and file outputs.

pub mod config;
pub mod csvio;
pub mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vet_core::{run, summarize, ControllerMode, RunSummary, ScenarioConfig, SummaryThresholds};

pub use config::ConfigSource;
pub use plot::PlotKind;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error("simulation failed: {0}")]
    Sim(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Csv(_) | CliError::Usage(_) => 2,
            CliError::Sim(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

/// Files written by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputBundle {
    pub trajectory_csv: PathBuf,
    pub summary_json: PathBuf,
    pub plots: Vec<PathBuf>,
    pub config_echo: PathBuf,
}

/// Files written by `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareBundle {
    pub vet: OutputBundle,
    pub baseline: OutputBundle,
    pub distance_plot: PathBuf,
    pub compare_json: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct Delta {
    /// VET minus baseline.
    pub max_projected_distance: f64,
    pub max_projected_distance_after_transient: f64,
    pub recovery_time_after_perturbation: Option<f64>,
    pub vet_mission_success: bool,
    pub baseline_mission_success: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub name: String,
    pub vet: RunSummary,
    pub baseline: RunSummary,
    pub delta: Delta,
}

/// Writes `bytes` to `path` through a temp file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Everything a run produces, held in memory until it is written.
struct Artifacts {
    csv: Vec<u8>,
    summary: RunSummary,
    echo: String,
}

fn execute(cfg: &ScenarioConfig) -> Result<Artifacts, CliError> {
    let log = run(cfg).map_err(|e| CliError::Sim(e.to_string()))?;
    let summary = summarize(
        &log,
        &cfg.name,
        cfg.controller_mode,
        &SummaryThresholds::from_config(cfg),
    )
    .map_err(|e| CliError::Sim(e.to_string()))?;
    let mut csv = Vec::new();
    csvio::write_log(&log, &mut csv)?;
    Ok(Artifacts {
        csv,
        summary,
        echo: config::echo(cfg)?,
    })
}

fn json<T: Serialize>(v: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| CliError::Sim(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn write_bundle(a: &Artifacts, out: &Path) -> Result<OutputBundle, CliError> {
    let rows = csvio::read_rows(a.csv.as_slice())?;
    let bundle = OutputBundle {
        trajectory_csv: out.join("trajectory.csv"),
        summary_json: out.join("summary.json"),
        plots: PlotKind::ALL
            .iter()
            .map(|k| out.join(format!("{}.svg", k.as_str())))
            .collect(),
        config_echo: out.join("config.toml"),
    };
    write_atomic(&bundle.trajectory_csv, &a.csv)?;
    write_atomic(&bundle.summary_json, &json(&a.summary)?)?;
    write_atomic(&bundle.config_echo, a.echo.as_bytes())?;
    for (kind, path) in PlotKind::ALL.iter().zip(&bundle.plots) {
        let svg = plot::chart(*kind, &rows, Some(a.summary.distance_threshold)).render();
        write_atomic(path, svg.as_bytes())?;
    }
    Ok(bundle)
}

/// Resolves the configuration, runs it and writes the bundle into `out`.
/// Nothing is written unless both configuration and simulation succeed.
pub fn cmd_run(src: &ConfigSource, out: &Path) -> Result<OutputBundle, CliError> {
    let cfg = config::resolve(src)?;
    let artifacts = execute(&cfg)?;
    write_bundle(&artifacts, out)
}

/// Runs the resolved configuration under both controller modes with the
/// same seed. Results go to `out/vet` and `out/baseline`.
pub fn cmd_compare(src: &ConfigSource, out: &Path) -> Result<CompareBundle, CliError> {
    let mut cfg_vet = config::resolve(&ConfigSource {
        mode: Some(ControllerMode::Vet),
        ..src.clone()
    })?;
    let cfg_base = ScenarioConfig {
        controller_mode: ControllerMode::Baseline,
        ..cfg_vet.clone()
    };
    cfg_vet.controller_mode = ControllerMode::Vet;
    let (vet, base) = std::thread::scope(|s| {
        let h = s.spawn(|| execute(&cfg_base));
        let vet = execute(&cfg_vet);
        (vet, h.join().expect("baseline run panicked"))
    });
    let (vet, base) = (vet?, base?);

    let vet_bundle = write_bundle(&vet, &out.join("vet"))?;
    let base_bundle = write_bundle(&base, &out.join("baseline"))?;

    let vet_rows = csvio::read_rows(vet.csv.as_slice())?;
    let base_rows = csvio::read_rows(base.csv.as_slice())?;
    let distance_plot = out.join("compare_distance.svg");
    let svg = plot::compare_distance(&vet_rows, &base_rows, cfg_vet.distance_threshold).render();
    write_atomic(&distance_plot, svg.as_bytes())?;

    let (v, b) = (&vet.summary, &base.summary);
    let comparison = Comparison {
        name: cfg_vet.name.clone(),
        delta: Delta {
            max_projected_distance: v.max_projected_distance - b.max_projected_distance,
            max_projected_distance_after_transient: v.max_projected_distance_after_transient
                - b.max_projected_distance_after_transient,
            recovery_time_after_perturbation: v
                .recovery_time_after_perturbation
                .zip(b.recovery_time_after_perturbation)
                .map(|(a, b)| a - b),
            vet_mission_success: v.mission_success,
            baseline_mission_success: b.mission_success,
        },
        vet: vet.summary,
        baseline: base.summary,
    };
    let compare_json = out.join("compare.json");
    write_atomic(&compare_json, &json(&comparison)?)?;

    Ok(CompareBundle {
        vet: vet_bundle,
        baseline: base_bundle,
        distance_plot,
        compare_json,
    })
}

/// Renders one figure from an existing trajectory CSV. Without `out` the
/// SVG lands next to the CSV as `<kind>.svg`.
pub fn cmd_plot(
    csv_path: &Path,
    kind: PlotKind,
    threshold: Option<f64>,
    out: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let file = std::fs::File::open(csv_path)
        .map_err(|e| CliError::Csv(format!("{}: {e}", csv_path.display())))?;
    let rows = csvio::read_rows(std::io::BufReader::new(file))?;
    let svg = plot::chart(kind, &rows, threshold).render();
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => csv_path
            .parent()
            .unwrap_or(Path::new("."))
            .join(format!("{}.svg", kind.as_str())),
    };
    write_atomic(&path, svg.as_bytes())?;
    Ok(path)
}
