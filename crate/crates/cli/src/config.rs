//! Run configuration: a JSON file with command-line overrides on top.

use std::path::{Path, PathBuf};

use clap::Args;
use fcat_core::sweep::Grid;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub zeta_sq: f64,
    pub n_max: usize,
    pub xi_grid: Grid,
    pub t_grid: Grid,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            zeta_sq: 3.0,
            n_max: 64,
            xi_grid: Grid {
                min: 0.0,
                max: 2.0,
                count: 201,
            },
            t_grid: Grid {
                min: 0.0,
                max: 3.0,
                count: 61,
            },
            out: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|err| CliError::Config(format!("{}: {err}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.zeta_sq.is_finite() || self.zeta_sq <= 0.0 {
            return Err(CliError::Config(format!(
                "zeta_sq must be positive, got {}",
                self.zeta_sq
            )));
        }
        if self.n_max < 1 {
            return Err(CliError::Config("n_max must be at least 1".into()));
        }
        self.xi_grid.validate()?;
        self.t_grid.validate()?;
        if self.xi_grid.min < 0.0 {
            return Err(CliError::Config("xi grid must be non-negative".into()));
        }
        if self.t_grid.min < 0.0 {
            return Err(CliError::Config("gamma_t grid must be non-negative".into()));
        }
        Ok(())
    }

    pub fn zeta(&self) -> f64 {
        self.zeta_sq.sqrt()
    }

    pub fn output_path(&self, default_stem: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let ext = match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            };
            PathBuf::from(format!("{default_stem}.{ext}"))
        })
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; flags below take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// |ζ|² of the coherent amplitude (default 3).
    #[arg(long)]
    pub zeta_sq: Option<f64>,
    /// Fock truncation (default 64).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// First ξ of the sweep grid.
    #[arg(long)]
    pub xi_min: Option<f64>,
    /// Last ξ of the sweep grid.
    #[arg(long)]
    pub xi_max: Option<f64>,
    /// Number of ξ grid points (default 201).
    #[arg(long)]
    pub xi_count: Option<usize>,
    /// Largest γt of the fidelity grid (default 3).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of γt grid points (default 61).
    #[arg(long)]
    pub t_count: Option<usize>,
    /// Output file; sidecars go next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Table format for sweep and fidelity.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Overrides {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.zeta_sq {
            cfg.zeta_sq = v;
        }
        if let Some(v) = self.n_max {
            cfg.n_max = v;
        }
        if let Some(v) = self.xi_min {
            cfg.xi_grid.min = v;
        }
        if let Some(v) = self.xi_max {
            cfg.xi_grid.max = v;
        }
        if let Some(v) = self.xi_count {
            cfg.xi_grid.count = v;
        }
        if let Some(v) = self.t_max {
            cfg.t_grid.max = v;
        }
        if let Some(v) = self.t_count {
            cfg.t_grid.count = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_figure_settings() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.zeta_sq, 3.0);
        assert_eq!(cfg.n_max, 64);
        assert_eq!(cfg.xi_grid.count, 201);
        assert_eq!(cfg.t_grid.count, 61);
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"zeta_sq": 2.0, "format": "json"}"#).unwrap();
        assert_eq!(cfg.zeta_sq, 2.0);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.n_max, 64);
    }

    #[test]
    fn flags_override_and_validate() {
        let o = Overrides {
            xi_count: Some(1),
            ..Default::default()
        };
        assert!(o.resolve().is_err());
        let o = Overrides {
            t_max: Some(15.0),
            ..Default::default()
        };
        assert_eq!(o.resolve().unwrap().t_grid.max, 15.0);
    }
}
