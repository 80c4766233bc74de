//! Config-file equivalents of the command-line flags. Flags win over the file,
//! and the file wins over preset values.

use std::fs;
use std::path::{Path, PathBuf};

use ccifc::region::{GridSpec, Mask};
use ccifc::scenario::{figure_preset, DpcMode, GaussianScenario, Preset};
use serde::Deserialize;

use crate::run::{CliResult, Failure};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    /// Path to a scenario file, relative to the config file.
    pub scenario: Option<PathBuf>,
    pub strategy: Option<String>,
    pub grid: Option<usize>,
    pub dpc: Option<String>,
    #[serde(default)]
    pub masks: Vec<String>,
    pub h21: Option<f64>,
    pub n2: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub cap_with_gain: Option<bool>,
    pub figure: Option<String>,
    pub channel: Option<PathBuf>,
    pub fixture: Option<String>,
    pub capacity: Option<String>,
    pub check_only: Option<bool>,
    pub q: Option<usize>,
    pub t_max: Option<usize>,
    pub samples: Option<usize>,
}

impl ConfigFile {
    /// Reads `path`, resolving file references against its directory.
    pub fn load(path: Option<&Path>) -> CliResult<ConfigFile> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        let mut cfg: ConfigFile =
            serde_json::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.scenario, &mut cfg.channel, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

pub fn parse_preset(name: &str) -> CliResult<Preset> {
    Preset::parse(name).map_err(|e| Failure::config(e.to_string()))
}

/// Scenario from the file or preset, then the `h21`/`n2` overrides.
pub fn resolve_scenario(
    preset: Option<&str>,
    file: Option<&Path>,
    h21: Option<f64>,
    n2: Option<f64>,
) -> CliResult<GaussianScenario> {
    let mut scen = match (file, preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
            GaussianScenario::from_json(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => figure_preset(parse_preset(name)?).scenario,
        (None, None) => return Err(Failure::config("give --preset or --scenario")),
    };
    if let Some(v) = h21 {
        scen.h21 = v;
    }
    if let Some(v) = n2 {
        scen.n2 = v;
    }
    scen.validate().map_err(|e| Failure::config(e.to_string()))?;
    Ok(scen)
}

pub fn parse_dpc(text: &str) -> CliResult<DpcMode> {
    DpcMode::parse(text).ok_or_else(|| Failure::config(format!("bad --dpc `{text}` (paper, zero or manual:a1,a2)")))
}

pub fn parse_masks(entries: &[String]) -> CliResult<Mask> {
    let mut mask = Mask::default();
    for e in entries {
        let (field, value) = Mask::parse_entry(e)
            .ok_or_else(|| Failure::config(format!("bad --mask `{e}` (field=value with value in [0, 1])")))?;
        mask = mask.pin(field, value);
    }
    Ok(mask)
}

pub fn grid_spec(points: Option<usize>) -> CliResult<GridSpec> {
    match points {
        None => Ok(GridSpec::default()),
        Some(n) if n >= 2 => Ok(GridSpec::uniform(n)),
        Some(n) => Err(Failure::config(format!("--grid must be at least 2, got {n}"))),
    }
}
