//! Pipeline configuration loading and flag overrides.

use std::path::Path;

use clap::Args;
use hubtrack_core::pipeline::PipelineConfig;

use crate::error::{CliError, CliResult};

/// Detection flags shared by `detect`, `track` and `run`; every flag
/// overrides the corresponding config-file value when given.
#[derive(Debug, Clone, Default, Args)]
pub struct HoughOverrides {
    /// Inverse accumulator resolution ratio.
    #[arg(long)]
    pub dp: Option<f64>,
    /// Minimum distance between accepted circle centres, pixels.
    #[arg(long)]
    pub min_dist: Option<f64>,
    /// Canny high threshold; the low threshold is always half of it.
    #[arg(long)]
    pub canny_high: Option<f32>,
    /// Minimum accumulator votes for a candidate centre.
    #[arg(long)]
    pub acc_threshold: Option<u32>,
    /// Minimum circle radius, pixels (0 means 1).
    #[arg(long)]
    pub min_radius: Option<u32>,
    /// Maximum circle radius, pixels (0 means unbounded).
    #[arg(long)]
    pub max_radius: Option<u32>,
    /// Gaussian blur sigma applied before edge detection (0 disables).
    #[arg(long)]
    pub blur_sigma: Option<f64>,
}

impl HoughOverrides {
    pub fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(v) = self.dp {
            cfg.hough.dp = v;
        }
        if let Some(v) = self.min_dist {
            cfg.hough.min_dist = v;
        }
        if let Some(v) = self.canny_high {
            cfg.hough.canny_high = v;
        }
        if let Some(v) = self.acc_threshold {
            cfg.hough.acc_threshold = v;
        }
        if let Some(v) = self.min_radius {
            cfg.hough.min_radius = v;
        }
        if let Some(v) = self.max_radius {
            cfg.hough.max_radius = v;
        }
        if let Some(v) = self.blur_sigma {
            cfg.blur_sigma = v;
        }
    }
}

/// Reads a JSON pipeline config; missing fields take their defaults,
/// unknown fields are rejected.
pub fn load_config(path: &Path) -> CliResult<PipelineConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(CliError::io(format!("reading config {}", path.display())))?;
    let cfg: PipelineConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    cfg.validate().map_err(CliError::from)?;
    Ok(cfg)
}
