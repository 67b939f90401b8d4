//! Resolving a [`ScenarioConfig`] from a preset, an optional TOML file and
//! `--set key=value` overrides.

use std::path::Path;

use toml::{Table, Value};
use vet_core::{preset, ControllerMode, ScenarioConfig};

use crate::CliError;

/// Inputs that decide which configuration a command runs.
#[derive(Debug, Clone, Default)]
pub struct ConfigSource<'a> {
    pub preset: Option<&'a str>,
    pub file: Option<&'a Path>,
    pub overrides: &'a [String],
    pub mode: Option<ControllerMode>,
    pub seed: Option<u64>,
}

fn to_table(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    Table::try_from(cfg).map_err(|e| CliError::Config(format!("cannot encode config: {e}")))
}

/// Recursively overlays `top` onto `base`.
fn merge(base: &mut Table, top: Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn parse_value(raw: &str) -> Value {
    toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn slot<'v>(root: &'v mut Value, path: &str) -> Result<&'v mut Value, CliError> {
    let mut cur = root;
    for seg in path.split('.') {
        cur = match cur {
            Value::Table(t) => t.entry(seg.to_string()).or_insert(Value::Table(Table::new())),
            Value::Array(a) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| CliError::Config(format!("`{path}`: `{seg}` is not an index")))?;
                let len = a.len();
                a.get_mut(i).ok_or_else(|| {
                    CliError::Config(format!("`{path}`: index {i} out of range ({len})"))
                })?
            }
            _ => return Err(CliError::Config(format!("`{path}` does not name a field"))),
        };
    }
    Ok(cur)
}

fn lookup<'v>(root: &'v Value, path: &str) -> Option<&'v Value> {
    path.split('.').try_fold(root, |cur, seg| match cur {
        Value::Table(t) => t.get(seg),
        Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

/// Applies a single `dotted.path=value` override.
pub fn apply_override(table: &mut Table, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not key=value")))?;
    let path = path.trim();
    if path.is_empty() {
        return Err(CliError::Config("override with an empty key".into()));
    }
    let mut root = Value::Table(std::mem::take(table));
    let result = slot(&mut root, path).map(|v| *v = parse_value(raw.trim()));
    if let Value::Table(t) = root {
        *table = t;
    }
    result
}

fn decode(table: Table) -> Result<ScenarioConfig, CliError> {
    table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
}

/// Builds and validates the configuration for one run.
pub fn resolve(src: &ConfigSource) -> Result<ScenarioConfig, CliError> {
    let mut file_table = match src.file {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Some(
                toml::from_str::<Table>(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
            )
        }
        None => None,
    };
    let file_preset = match file_table.as_mut().and_then(|t| t.remove("preset")) {
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(CliError::Config("`preset` must be a string".into())),
        None => None,
    };
    let preset_name = src.preset.map(str::to_string).or(file_preset);
    let mut table = match (&preset_name, &file_table) {
        (Some(name), _) => to_table(&preset(name).map_err(|e| CliError::Config(e.to_string()))?)?,
        (None, Some(_)) => Table::new(),
        (None, None) => to_table(&preset("nominal").expect("built-in preset"))?,
    };
    if let Some(t) = file_table {
        merge(&mut table, t);
    }
    for o in src.overrides {
        apply_override(&mut table, o)?;
    }
    let mut cfg = decode(table)?;
    if let Some(m) = src.mode {
        cfg.controller_mode = m;
    }
    if let Some(s) = src.seed {
        cfg.seed = s;
    }
    let echo = Value::Table(to_table(&cfg)?);
    for o in src.overrides {
        let path = o.split_once('=').map(|(p, _)| p.trim()).unwrap_or_default();
        if lookup(&echo, path).is_none() {
            return Err(CliError::Config(format!("unknown configuration key `{path}`")));
        }
    }
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(cfg)
}

/// Fully resolved configuration as TOML text.
pub fn echo(cfg: &ScenarioConfig) -> Result<String, CliError> {
    toml::to_string(cfg).map_err(|e| CliError::Config(format!("cannot encode config: {e}")))
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use vet_core::PRESETS;

    #[test]
    fn echo_round_trips_every_preset() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            assert_eq!(parse(&echo(&cfg).unwrap()).unwrap(), cfg, "{name}");
        }
    }

    #[test]
    fn overrides_reach_nested_fields() {
        let sets = vec![
            "dt=0.01".to_string(),
            "vet.k_psi=0.25".to_string(),
            "perturbations.0.force=[-1.0, 0.0, 0.0]".to_string(),
            "name=\"custom\"".to_string(),
        ];
        let cfg = resolve(&ConfigSource {
            preset: Some("perturbation_sim"),
            overrides: &sets,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.dt, 0.01);
        assert_eq!(cfg.vet.k_psi, 0.25);
        assert_eq!(cfg.perturbations[0].force, [-1.0, 0.0, 0.0]);
        assert_eq!(cfg.name, "custom");
    }

    #[test]
    fn bad_overrides_are_config_errors() {
        for bad in ["dt", "nonexistent.key=1", "dt=\"fast\"", "dt=0.5", "perturbations.7.force=1"] {
            let sets = vec![bad.to_string()];
            let err = resolve(&ConfigSource {
                preset: Some("perturbation_sim"),
                overrides: &sets,
                ..Default::default()
            })
            .unwrap_err();
            assert!(matches!(err, CliError::Config(_)), "{bad}: {err:?}");
        }
    }

    #[test]
    fn mode_and_seed_flags_win() {
        let cfg = resolve(&ConfigSource {
            preset: Some("nominal"),
            mode: Some(ControllerMode::Baseline),
            seed: Some(42),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.controller_mode, ControllerMode::Baseline);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn unknown_preset_is_a_config_error() {
        let err = resolve(&ConfigSource {
            preset: Some("nope"),
            ..Default::default()
        })
        .unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }
}
