//! Run configuration: built-in defaults, overridden by a TOML config file,
//! overridden by command-line flags.

use std::path::{Path, PathBuf};

use histspline::{BinRule, BoundaryCondition, CorpusConfig, ParamRange, RngKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_GRID: usize = 1001;
pub const DEFAULT_COLUMN: &str = "x";

/// Settings the `estimate` command runs with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub generate: bool,
    pub column: String,
    pub rule: String,
    pub bc: String,
    pub grid: usize,
}

impl Default for EstimateSettings {
    fn default() -> Self {
        Self {
            input: None,
            generate: false,
            column: DEFAULT_COLUMN.to_string(),
            rule: BinRule::knuth().to_string(),
            bc: BoundaryCondition::NotAKnot.to_string(),
            grid: DEFAULT_GRID,
        }
    }
}

/// Fully resolved configuration. Serializes to the config-file format, so
/// `--emit-config` output can be fed back through `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub generator: CorpusConfig,
    pub estimate: EstimateSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out_dir: PathBuf::from("."),
            generator: CorpusConfig::default(),
            estimate: EstimateSettings::default(),
        }
    }
}

/// Config-file contents; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub generator: GeneratorOverrides,
    #[serde(default)]
    pub estimate: EstimateOverrides,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct GeneratorOverrides {
    /// Number of braking series.
    #[arg(long)]
    pub count: Option<usize>,
    /// Generator seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample interval in seconds.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Initial speed range, m/s, as MIN:MAX.
    #[arg(long, value_parser = parse_range)]
    pub v0: Option<ParamRange>,
    /// Reaction time range, s, as MIN:MAX.
    #[arg(long, value_parser = parse_range)]
    pub t_react: Option<ParamRange>,
    /// Deceleration range, m/s^2, as MIN:MAX.
    #[arg(long, value_parser = parse_range)]
    pub decel: Option<ParamRange>,
    #[arg(skip)]
    pub rng: Option<RngKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct EstimateOverrides {
    /// CSV file to read samples from.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Estimate from a freshly generated braking corpus instead of a file.
    #[arg(long, num_args = 0, default_missing_value = "true")]
    pub generate: Option<bool>,
    /// Numeric column holding the samples.
    #[arg(long)]
    pub column: Option<String>,
    /// Bin rule: sqrt, sturges, scott, fd, knuth, knuth:MAX or fixed:K.
    #[arg(long)]
    pub rule: Option<String>,
    /// Spline end condition: clamped, natural or not-a-knot.
    #[arg(long)]
    pub bc: Option<String>,
    /// Number of points in the exported density curve.
    #[arg(long)]
    pub grid: Option<usize>,
}

pub fn parse_range(s: &str) -> std::result::Result<ParamRange, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got {s:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|e| format!("{v:?}: {e}"))
    };
    Ok(ParamRange::new(parse(lo)?, parse(hi)?))
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn apply_generator(target: &mut CorpusConfig, o: &GeneratorOverrides) {
    if let Some(v) = o.count {
        target.count = v;
    }
    if let Some(v) = o.seed {
        target.seed = v;
    }
    if let Some(v) = o.dt {
        target.dt = v;
    }
    if let Some(v) = o.v0 {
        target.v0 = v;
    }
    if let Some(v) = o.t_react {
        target.t_react = v;
    }
    if let Some(v) = o.decel {
        target.decel = v;
    }
    if let Some(v) = o.rng {
        target.rng = v;
    }
}

fn apply_estimate(target: &mut EstimateSettings, o: &EstimateOverrides) {
    if let Some(v) = &o.input {
        target.input = Some(v.clone());
    }
    if let Some(v) = o.generate {
        target.generate = v;
    }
    if let Some(v) = &o.column {
        target.column = v.clone();
    }
    if let Some(v) = &o.rule {
        target.rule = v.clone();
    }
    if let Some(v) = &o.bc {
        target.bc = v.clone();
    }
    if let Some(v) = o.grid {
        target.grid = v;
    }
}

impl RunConfig {
    /// Defaults, then `file`, then the flag overrides.
    pub fn resolve(
        file: Option<&FileConfig>,
        out_dir: Option<&Path>,
        generator: &GeneratorOverrides,
        estimate: &EstimateOverrides,
    ) -> Self {
        let mut config = RunConfig::default();
        if let Some(file) = file {
            if let Some(dir) = &file.out_dir {
                config.out_dir = dir.clone();
            }
            apply_generator(&mut config.generator, &file.generator);
            apply_estimate(&mut config.estimate, &file.estimate);
        }
        if let Some(dir) = out_dir {
            config.out_dir = dir.to_path_buf();
        }
        apply_generator(&mut config.generator, generator);
        apply_estimate(&mut config.estimate, estimate);
        config
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    pub fn rule(&self) -> Result<BinRule> {
        Ok(self.estimate.rule.parse()?)
    }

    pub fn boundary(&self) -> Result<BoundaryCondition> {
        self.estimate.bc.parse().map_err(CliError::Usage)
    }

    pub fn validate_grid(&self) -> Result<()> {
        if self.estimate.grid < 2 {
            return Err(CliError::Usage(format!(
                "grid size must be at least 2, got {}",
                self.estimate.grid
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file: FileConfig = toml::from_str(
            r#"
            out_dir = "from-file"
            [generator]
            count = 10
            seed = 5
            [estimate]
            rule = "sturges"
            bc = "natural"
            "#,
        )
        .unwrap();
        let flags = GeneratorOverrides {
            seed: Some(9),
            ..Default::default()
        };
        let est = EstimateOverrides {
            bc: Some("clamped".into()),
            ..Default::default()
        };
        let c = RunConfig::resolve(Some(&file), None, &flags, &est);
        assert_eq!(c.out_dir, PathBuf::from("from-file"));
        assert_eq!(c.generator.count, 10);
        assert_eq!(c.generator.seed, 9);
        assert_eq!(c.generator.dt, 0.01);
        assert_eq!(c.estimate.rule, "sturges");
        assert_eq!(c.estimate.bc, "clamped");
        assert_eq!(c.estimate.grid, DEFAULT_GRID);
    }

    #[test]
    fn emitted_config_reloads_to_the_same_run() {
        let mut c = RunConfig::default();
        c.generator.count = 3;
        c.estimate.input = Some("data.csv".into());
        let file: FileConfig = toml::from_str(&c.to_toml()).unwrap();
        let back = RunConfig::resolve(Some(&file), None, &Default::default(), &Default::default());
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[estimate]\nbins = 3\n").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:2.5").unwrap(), ParamRange::new(1.0, 2.5));
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:2").is_err());
    }
}
