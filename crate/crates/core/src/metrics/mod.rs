//! Albedo and shading metrics, the forward fine-tuning losses, and per-image
//! evaluation.
//!
//! Every metric is computed on linear RGB. A metric that cannot be computed
//! for an image (no judgements, no usable rectangle, ...) returns
//! [`Error::MetricAbsent`](crate::Error) with a [`SkipReason`]; the
//! evaluation records the reason instead of a value.

mod chroma;
mod evaluate;
mod intensity;
mod judgement;
mod loss;
mod shading;
mod texture;

use serde::{Deserialize, Serialize};

use crate::imagecore::LinearImage;

pub use chroma::{chromaticity_error, ChromaResult};
pub use evaluate::{evaluate_image, region_samples, ImageContext};
pub use intensity::{intensity_si_mse, RegionSample, SiMse};
pub use judgement::{convert_judgement, whdr, JUDGEMENT_FLOOR};
pub use loss::{finetune_loss_forward, pixel_si_mse_loss, whdr_hinge_surrogate, LossBreakdown, LossWeights};
pub use shading::sparse_shading_si_mse;
pub use texture::{texture_error, texture_error_on_masks, TextureParams, TextureResult};

/// Which side of a scale-invariant comparison receives the fitted scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleTarget {
    Gt,
    Pred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    NoJudgements,
    NoRegions,
    NoRectangles,
    EmptyShadingMask,
    DegenerateScale,
    DegenerateRegions,
    EvaluationError,
    NotRequested,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SkipReason::NoJudgements => "no judgements",
            SkipReason::NoRegions => "no regions",
            SkipReason::NoRectangles => "no rectangles",
            SkipReason::EmptyShadingMask => "empty shading mask",
            SkipReason::DegenerateScale => "degenerate scale",
            SkipReason::DegenerateRegions => "all regions degenerate",
            SkipReason::EvaluationError => "evaluation error",
            SkipReason::NotRequested => "not requested",
        };
        f.write_str(s)
    }
}

/// One algorithm's output for one image, at any resolution.
#[derive(Debug, Clone)]
pub struct AlgorithmPrediction {
    pub image_id: String,
    pub albedo: LinearImage,
    pub shading: Option<LinearImage>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Whdr,
    Intensity,
    Chromaticity,
    Texture,
    Shading,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [
        MetricKind::Whdr,
        MetricKind::Intensity,
        MetricKind::Chromaticity,
        MetricKind::Texture,
        MetricKind::Shading,
    ];

    /// The four albedo metrics used for ranking by default.
    pub const ALBEDO: [MetricKind; 4] = [
        MetricKind::Whdr,
        MetricKind::Intensity,
        MetricKind::Chromaticity,
        MetricKind::Texture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Whdr => "whdr",
            MetricKind::Intensity => "intensity",
            MetricKind::Chromaticity => "chromaticity",
            MetricKind::Texture => "texture",
            MetricKind::Shading => "shading",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| crate::Error::Parameter(format!("unknown metric '{s}'")))
    }
}

/// A metric value or the reason it is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MetricEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<SkipReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl MetricEntry {
    pub fn value(v: f64) -> Self {
        Self {
            value: Some(v),
            ..Default::default()
        }
    }

    pub fn skipped(reason: SkipReason) -> Self {
        Self {
            skip_reason: Some(reason),
            ..Default::default()
        }
    }

    pub(crate) fn from_result(r: crate::Result<f64>) -> Self {
        match r {
            Ok(v) => Self::value(v),
            Err(crate::Error::MetricAbsent(reason)) => Self::skipped(reason),
            Err(e) => Self {
                skip_reason: Some(SkipReason::EvaluationError),
                detail: Some(e.to_string()),
                value: None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageMetrics {
    pub image_id: String,
    pub whdr: MetricEntry,
    pub intensity_si_mse: MetricEntry,
    pub chroma_error: MetricEntry,
    pub texture_error: MetricEntry,
    pub shading_si_mse: MetricEntry,
    /// Shading was computed as image / predicted albedo.
    pub derived_shading: bool,
    /// Prediction was resampled to the annotation resolution.
    pub resampled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shading_scale: Option<f64>,
    pub chroma_degenerate_regions: usize,
    pub texture_rectangles: usize,
}

impl ImageMetrics {
    pub fn get(&self, kind: MetricKind) -> &MetricEntry {
        match kind {
            MetricKind::Whdr => &self.whdr,
            MetricKind::Intensity => &self.intensity_si_mse,
            MetricKind::Chromaticity => &self.chroma_error,
            MetricKind::Texture => &self.texture_error,
            MetricKind::Shading => &self.shading_si_mse,
        }
    }
}

/// Aggregate scores of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricVector {
    pub algorithm: String,
    #[serde(default)]
    pub whdr: Option<f64>,
    #[serde(default)]
    pub intensity: Option<f64>,
    #[serde(default)]
    pub chromaticity: Option<f64>,
    #[serde(default)]
    pub texture: Option<f64>,
    #[serde(default)]
    pub shading: Option<f64>,
    /// Number of images each aggregate averages over.
    #[serde(default)]
    pub counts: MetricCounts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MetricCounts {
    pub whdr: usize,
    pub intensity: usize,
    pub chromaticity: usize,
    pub texture: usize,
    pub shading: usize,
}

impl MetricVector {
    pub fn new(algorithm: impl Into<String>, values: [Option<f64>; 5]) -> Self {
        let [whdr, intensity, chromaticity, texture, shading] = values;
        Self {
            algorithm: algorithm.into(),
            whdr,
            intensity,
            chromaticity,
            texture,
            shading,
            counts: MetricCounts::default(),
        }
    }

    pub fn get(&self, kind: MetricKind) -> Option<f64> {
        match kind {
            MetricKind::Whdr => self.whdr,
            MetricKind::Intensity => self.intensity,
            MetricKind::Chromaticity => self.chromaticity,
            MetricKind::Texture => self.texture,
            MetricKind::Shading => self.shading,
        }
    }

    /// Unweighted mean over the images where each metric is defined.
    pub fn aggregate(algorithm: impl Into<String>, images: &[ImageMetrics]) -> Self {
        let mean = |kind: MetricKind| {
            let vals: Vec<f64> = images.iter().filter_map(|m| m.get(kind).value).collect();
            let n = vals.len();
            ((n > 0).then(|| vals.iter().sum::<f64>() / n as f64), n)
        };
        let (whdr, n_whdr) = mean(MetricKind::Whdr);
        let (intensity, n_int) = mean(MetricKind::Intensity);
        let (chromaticity, n_chroma) = mean(MetricKind::Chromaticity);
        let (texture, n_tex) = mean(MetricKind::Texture);
        let (shading, n_shading) = mean(MetricKind::Shading);
        Self {
            algorithm: algorithm.into(),
            whdr,
            intensity,
            chromaticity,
            texture,
            shading,
            counts: MetricCounts {
                whdr: n_whdr,
                intensity: n_int,
                chromaticity: n_chroma,
                texture: n_tex,
                shading: n_shading,
            },
        }
    }
}
