//! Run configuration: defaults, JSON config file, explicit flags.
//! Explicit flags win over the config file, which wins over defaults.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "MICROBEAM_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub zeta: Option<f64>,
    /// Full material parameters; when present (and `zeta` is absent) the
    /// stiffness ratio is derived from them.
    pub material: Option<MaterialConfig>,
    pub n_modes: Option<usize>,
    pub tol: Option<f64>,
    pub quadrature: Option<QuadratureConfig>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    pub seed: Option<u64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

/// Dimensional material constants, mirroring the library's parameter set.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub e_young: f64,
    pub mu_shear: f64,
    pub i_area: f64,
    pub a_section: f64,
    pub rho: f64,
    pub length: f64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
}

impl MaterialConfig {
    pub fn to_params(self) -> microbeam::model::MaterialParams<f64> {
        microbeam::model::MaterialParams {
            e_young: self.e_young,
            mu_shear: self.mu_shear,
            i_area: self.i_area,
            a_section: self.a_section,
            rho: self.rho,
            length: self.length,
            l0: self.l0,
            l1: self.l1,
            l2: self.l2,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub nodes: usize,
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub zeta: f64,
    pub n_modes: usize,
    pub tol: f64,
    pub quadrature: QuadratureConfig,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            zeta: 1.0,
            n_modes: 10,
            tol: 1e-12,
            quadrature: QuadratureConfig {
                panels: 64,
                nodes: 8,
            },
            horizon: 8.0,
            seed: 0,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        let file = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
        };
        if let Some(p) = file {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("reading config file {}", p.display()))?;
            let parsed: ConfigFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing config file {}", p.display()))?;
            cfg.apply(&parsed)?;
        }
        Ok(cfg)
    }

    fn apply(&mut self, file: &ConfigFile) -> Result<()> {
        match (file.zeta, &file.material) {
            (Some(v), _) => self.zeta = v,
            (None, Some(m)) => {
                self.zeta = microbeam::model::nondimensionalize(&m.to_params())
                    .context("deriving zeta from material parameters")?
                    .zeta();
            }
            (None, None) => {}
        }
        if let Some(v) = file.n_modes {
            self.n_modes = v;
        }
        if let Some(v) = file.tol {
            self.tol = v;
        }
        if let Some(v) = file.quadrature {
            self.quadrature = v;
        }
        if let Some(v) = file.horizon {
            self.horizon = v;
        }
        if let Some(v) = file.seed {
            self.seed = v;
        }
        if let Some(v) = file.output_format {
            self.output_format = v;
        }
        if let Some(v) = &file.output_path {
            self.output_path = Some(v.clone());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        anyhow::ensure!(self.zeta > 0.0, "zeta must be positive (got {})", self.zeta);
        anyhow::ensure!(self.n_modes >= 1, "n_modes must be at least 1");
        anyhow::ensure!(self.tol > 0.0, "tol must be positive");
        anyhow::ensure!(
            self.quadrature.panels >= 1 && self.quadrature.nodes >= 1,
            "quadrature panels/nodes must be at least 1"
        );
        Ok(())
    }
}
