//! Settings resolution: command-line flag, then `ZDC_D3_MODE` (for the d3
//! mode only), then the json config file, then defaults.

use crate::output::OutputFormat;
use crate::CliError;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use zdc_core::arith::D3Mode;
use zdc_core::foundations::LogGrid;
use zdc_core::pipeline::{default_schedule, EvalSettings, ScheduleRow};
use zdc_core::zerocount::ArgumentConstant;

pub const D3_MODE_ENV: &str = "ZDC_D3_MODE";

/// Optional json config file; every field may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub d3_mode: Option<D3Mode>,
    pub argument_constant: Option<ArgumentConstant>,
    pub schedule: Option<PathBuf>,
    pub kln_file: Option<PathBuf>,
    /// Interior points of the log-height grid.
    pub grid: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct FlagConfig {
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub d3_mode: Option<D3Mode>,
    pub argument_constant: Option<ArgumentConstant>,
    pub schedule: Option<PathBuf>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub eval: EvalSettings,
    pub schedule: Vec<ScheduleRow>,
    pub kln_file: Option<PathBuf>,
}

pub fn resolve(flags: FlagConfig, env_d3: Option<String>, file: FileConfig) -> Result<Settings, CliError> {
    let env_mode = env_d3
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<D3Mode>().map_err(|e| CliError::Usage(format!("{D3_MODE_ENV}: {e}"))))
        .transpose()?;
    let d3_mode = flags.d3_mode.or(env_mode).or(file.d3_mode).unwrap_or_default();
    let grid = flags.grid.or(file.grid).map_or_else(LogGrid::default, LogGrid::new);
    let schedule = match flags.schedule.or(file.schedule) {
        Some(path) => load_schedule(&path)?,
        None => default_schedule(),
    };
    Ok(Settings {
        format: flags.format.or(file.format).unwrap_or_default(),
        out: flags.out.or(file.out),
        eval: EvalSettings {
            d3_mode,
            grid,
            argument_constant: flags.argument_constant.or(file.argument_constant).unwrap_or_default(),
        },
        schedule,
        kln_file: file.kln_file,
    })
}

/// Reads a json array of `{t0_log, t1_log, alpha0, u, v, w, x}`.
pub fn load_schedule(path: &Path) -> Result<Vec<ScheduleRow>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("schedule {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_beats_env_beats_file() {
        let file = FileConfig { d3_mode: Some(D3Mode::Literal), ..FileConfig::default() };
        let s = resolve(FlagConfig::default(), Some("table".into()), file.clone()).unwrap();
        assert_eq!(s.eval.d3_mode, D3Mode::Table);
        let flags = FlagConfig { d3_mode: Some(D3Mode::Literal), ..FlagConfig::default() };
        let s = resolve(flags, Some("table".into()), file.clone()).unwrap();
        assert_eq!(s.eval.d3_mode, D3Mode::Literal);
        let file = FileConfig { d3_mode: Some(D3Mode::Table), ..FileConfig::default() };
        assert_eq!(resolve(FlagConfig::default(), None, file).unwrap().eval.d3_mode, D3Mode::Table);
    }

    #[test]
    fn bad_env_value_is_rejected() {
        assert!(resolve(FlagConfig::default(), Some("fancy".into()), FileConfig::default()).is_err());
    }

    #[test]
    fn file_fields_parse() {
        let f: FileConfig = serde_json::from_str(r#"{"format": "markdown", "d3_mode": "table", "grid": 64}"#).unwrap();
        assert_eq!(f.format, Some(OutputFormat::Markdown));
        assert_eq!(f.grid, Some(64));
        assert!(serde_json::from_str::<FileConfig>(r#"{"colour": "red"}"#).is_err());
        let f: FileConfig = serde_json::from_str(r#"{"argument_constant": "lemma"}"#).unwrap();
        let s = resolve(FlagConfig::default(), None, f).unwrap();
        assert_eq!(s.eval.argument_constant, ArgumentConstant::Lemma);
    }
}
