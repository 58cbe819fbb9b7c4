use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{distribution_by_id, EntryDistribution, COMPLEX_GAUSSIAN};
use crate::error::{Error, Result};

/// Largest `|z|` allowed on an evaluation grid.
pub const GRID_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Radius,
    Qn,
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub dist: String,
    pub n: Vec<usize>,
    pub trials: usize,
    #[serde(alias = "seed")]
    pub master_seed: Option<u64>,
    /// Evaluation grid, each point as `[re, im]`.
    pub z: Vec<Complex64>,
    /// Truncation order K of the limit series; chosen by the tail rule when absent.
    pub terms: Option<usize>,
    pub eps: f64,
    pub out: Option<PathBuf>,
    pub workers: usize,
    /// Record per-trial wall time; off by default so that reruns are byte-identical.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Radius,
            dist: COMPLEX_GAUSSIAN.to_string(),
            n: vec![64, 128, 256, 512],
            trials: 200,
            master_seed: None,
            z: vec![Complex64::new(0.3, 0.0), Complex64::new(0.5, 0.2)],
            terms: None,
            eps: 0.1,
            out: None,
            workers: 1,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    /// Reads a JSON or TOML file, chosen by extension (`.toml`, otherwise JSON).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))
        } else {
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))
        }
    }

    pub fn seed(&self) -> Result<u64> {
        self.master_seed
            .ok_or_else(|| Error::InvalidArgument("a master seed is required (--seed)".into()))
    }

    pub fn distribution(&self) -> Result<EntryDistribution> {
        distribution_by_id(&self.dist)
    }

    pub fn validate(&self) -> Result<()> {
        self.seed()?;
        self.distribution()?;
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::InvalidArgument("n must list positive dimensions".into()));
        }
        if self.n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("n values must be strictly ascending".into()));
        }
        if let Some(z) = self.z.iter().find(|z| !(z.norm() <= GRID_RADIUS)) {
            return Err(Error::InvalidArgument(format!(
                "grid point {z} lies outside |z| <= {GRID_RADIUS}"
            )));
        }
        if self.terms == Some(0) {
            return Err(Error::InvalidArgument("terms must be at least 1".into()));
        }
        if !(self.eps >= 0.0) {
            return Err(Error::InvalidArgument("eps must be nonnegative".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Experiment(format!("cannot start worker pool: {e}")))
    }
}
