//! Evaluation settings. Every field is echoed into reports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{MetricKind, ScaleTarget, TextureParams};
use crate::perceptual::BackendSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Ratio threshold of the judgement conversion.
    pub delta: f64,
    /// Shading blur σ in pixels at annotation resolution.
    pub sigma: f64,
    pub upsample: usize,
    pub min_rect_side: usize,
    /// 8-bit sRGB level at or above which a pixel counts as saturated.
    pub saturation_threshold: u8,
    pub texture_backend: BackendSpec,
    pub texture_encode_srgb: bool,
    pub intensity_scale_target: ScaleTarget,
    pub shading_scale_target: ScaleTarget,
    /// 0 lets the thread pool decide.
    pub workers: usize,
    pub metrics: Vec<MetricKind>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            sigma: 8.0,
            upsample: 2,
            min_rect_side: 32,
            saturation_threshold: 250,
            texture_backend: BackendSpec::Builtin,
            texture_encode_srgb: true,
            intensity_scale_target: ScaleTarget::Gt,
            shading_scale_target: ScaleTarget::Pred,
            workers: 0,
            metrics: MetricKind::ALL.to_vec(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            problems.push(format!("delta must be > 0, got {}", self.delta));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            problems.push(format!("sigma must be > 0, got {}", self.sigma));
        }
        if self.upsample == 0 {
            problems.push("upsample must be >= 1".into());
        }
        if self.min_rect_side == 0 {
            problems.push("min_rect_side must be >= 1".into());
        }
        if self.saturation_threshold == 0 {
            problems.push("saturation_threshold must be >= 1".into());
        }
        if self.metrics.is_empty() {
            problems.push("metric subset is empty".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    pub fn texture_params(&self) -> TextureParams {
        TextureParams {
            upsample: self.upsample,
            min_side: self.min_rect_side,
            encode_srgb: self.texture_encode_srgb,
        }
    }

    pub fn wants(&self, kind: MetricKind) -> bool {
        self.metrics.contains(&kind)
    }
}
