//! Run configuration: flags override the config file, which overrides the
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::{LabError, LabResult};

pub const CONFIG_FORMAT: &str = "steklov-config";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_LEVELS: [u32; 3] = [3, 4, 5];
pub const DEFAULT_REFINEMENT: u32 = 4;
pub const DEFAULT_COUNT: usize = 10;
pub const DEFAULT_TRIALS: u64 = 1000;
/// Default output directory when `--out` is not given.
pub const OUT_DIR_ENV: &str = "STEKLOV_OUT_DIR";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Contents of a config file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: String,
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub levels: Option<Vec<u32>>,
    pub refinement: Option<u32>,
    pub count: Option<usize>,
    pub trials: Option<u64>,
    pub no_timestamp: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str, origin: &str) -> LabResult<Self> {
        let cfg: FileConfig = serde_json::from_str(text).map_err(|e| LabError::Parse {
            origin: origin.into(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        if cfg.format != CONFIG_FORMAT || cfg.schema_version != 1 {
            return Err(LabError::Parse {
                origin: origin.into(),
                line: None,
                column: None,
                message: format!(
                    "expected format \"{CONFIG_FORMAT}\" with schema_version 1, found \"{}\" version {}",
                    cfg.format, cfg.schema_version
                ),
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}

/// Global settings after precedence has been applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub levels: Vec<u32>,
    pub refinement: u32,
    pub count: usize,
    pub trials: u64,
    pub timestamp: bool,
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub levels: Option<Vec<u32>>,
    pub refinement: Option<u32>,
    pub count: Option<usize>,
    pub trials: Option<u64>,
    pub no_timestamp: bool,
}

impl RunConfig {
    pub fn resolve(flags: Overrides, file: Option<FileConfig>) -> LabResult<Self> {
        let file = file.unwrap_or_default();
        let cfg = RunConfig {
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            tolerance: flags.tolerance.or(file.tolerance),
            out: flags.out.or(file.out),
            format: flags.format.or(file.output_format).unwrap_or_default(),
            levels: flags.levels.or(file.levels).unwrap_or_else(|| DEFAULT_LEVELS.to_vec()),
            refinement: flags.refinement.or(file.refinement).unwrap_or(DEFAULT_REFINEMENT),
            count: flags.count.or(file.count).unwrap_or(DEFAULT_COUNT),
            trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            timestamp: !(flags.no_timestamp || file.no_timestamp.unwrap_or(false)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> LabResult<()> {
        if self.levels.is_empty() || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Usage(format!(
                "refinement levels must be nonempty and strictly increasing, got {:?}",
                self.levels
            )));
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(LabError::Usage(format!("tolerance must be nonnegative, got {t}")));
            }
        }
        if self.count == 0 {
            return Err(LabError::Usage("count must be positive".into()));
        }
        if self.trials == 0 {
            return Err(LabError::Usage("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// `--out`, else `$STEKLOV_OUT_DIR/<name>.<ext>`, else standard output.
    pub fn destination(&self, name: &str, extension: &str) -> Option<PathBuf> {
        self.out.clone().or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| PathBuf::from(d).join(format!("{name}.{extension}")))
        })
    }
}
