//! Forward values of the fine-tuning objective. No gradients.

use serde::{Deserialize, Serialize};

use crate::dataset::{Judgement, JudgementPair, ResolvedRegion};
use crate::error::{Error, Result};
use crate::imagecore::{to_grayscale, GrayImage, LinearImage, Polygon};
use crate::perceptual::PerceptualDistance;

use super::{texture_error, SkipReason, TextureParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossWeights {
    /// Weight of the hinge term.
    pub beta: f64,
    /// Weight of the texture term.
    pub gamma: f64,
    /// Hinge margin.
    pub tau: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            beta: 2.0,
            gamma: 0.0005,
            tau: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub si_mse: f64,
    /// `None` without judgements.
    pub hinge: Option<f64>,
    /// `None` without a usable constant-shading rectangle.
    pub texture: Option<f64>,
    pub total: f64,
}

/// Hinge surrogate of WHDR.
///
/// Point 1 is `i`, point 2 is `j`. Equal pairs cost `w (R_i − R_j)²`; a pair
/// labelled `2` (j darker) costs `w max(0, τ − R_i + R_j)²` and its mirror
/// `w max(0, τ − R_j + R_i)²` for label `1`. Equal and unequal sums are
/// normalized by their own pair counts.
pub fn whdr_hinge_surrogate(pred_gray: &GrayImage, judgements: &[JudgementPair], tau: f64) -> Result<f64> {
    if judgements.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::NoJudgements));
    }
    let (w, h) = pred_gray.dims();
    let (mut eq_sum, mut eq_n, mut neq_sum, mut neq_n) = (0.0, 0usize, 0.0, 0usize);
    for j in judgements {
        let ((x1, y1), (x2, y2)) = j.pixels(w, h);
        let (ri, rj) = (pred_gray.get(x1, y1), pred_gray.get(x2, y2));
        match j.label {
            Judgement::Equal => {
                eq_sum += j.weight * (ri - rj).powi(2);
                eq_n += 1;
            }
            Judgement::SecondDarker => {
                neq_sum += j.weight * (tau - ri + rj).max(0.0).powi(2);
                neq_n += 1;
            }
            Judgement::FirstDarker => {
                neq_sum += j.weight * (tau - rj + ri).max(0.0).powi(2);
                neq_n += 1;
            }
        }
    }
    let eq = if eq_n > 0 { eq_sum / eq_n as f64 } else { 0.0 };
    let neq = if neq_n > 0 { neq_sum / neq_n as f64 } else { 0.0 };
    Ok(eq + neq)
}

/// Pixel-level si-MSE against measured albedos: one global
/// `θ = Σ R_j·G_i / Σ ‖R_j‖²` over region pixels, then
/// `Σ ‖θ R_j − G_i‖² / Σ |M_i|`.
pub fn pixel_si_mse_loss(pred: &LinearImage, regions: &[ResolvedRegion]) -> Result<f64> {
    if regions.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::NoRegions));
    }
    if let Some(r) = regions.iter().find(|r| r.mask.dims() != pred.dims()) {
        return Err(Error::Parameter(format!(
            "region mask {:?} does not match prediction {:?}",
            r.mask.dims(),
            pred.dims()
        )));
    }
    let data = pred.data();
    let (mut cross, mut energy, mut count) = (0.0, 0.0, 0usize);
    for r in regions {
        let g = r.measurement.albedo;
        for i in r.mask.indices() {
            for c in 0..3 {
                cross += data[i * 3 + c] * g[c];
                energy += data[i * 3 + c].powi(2);
            }
            count += 1;
        }
    }
    if energy <= 0.0 {
        return Err(Error::MetricAbsent(SkipReason::DegenerateScale));
    }
    let theta = cross / energy;
    let mut sum = 0.0;
    for r in regions {
        let g = r.measurement.albedo;
        for i in r.mask.indices() {
            for c in 0..3 {
                sum += (theta * data[i * 3 + c] - g[c]).powi(2);
            }
        }
    }
    Ok(sum / count as f64)
}

/// `si-MSE + β·hinge + γ·texture`; absent terms contribute nothing.
#[allow(clippy::too_many_arguments)]
pub fn finetune_loss_forward(
    image: &LinearImage,
    pred_albedo: &LinearImage,
    regions: &[ResolvedRegion],
    judgements: &[JudgementPair],
    constant_shading: &[Polygon],
    backend: &dyn PerceptualDistance,
    texture: &TextureParams,
    weights: &LossWeights,
) -> Result<LossBreakdown> {
    let si_mse = pixel_si_mse_loss(pred_albedo, regions)?;
    let absent_as_none = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::MetricAbsent(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let hinge = absent_as_none(whdr_hinge_surrogate(&to_grayscale(pred_albedo), judgements, weights.tau))?;
    let tex = if weights.gamma == 0.0 {
        None
    } else {
        absent_as_none(texture_error(image, pred_albedo, constant_shading, backend, texture).map(|t| t.value))?
    };
    let total = si_mse + weights.beta * hinge.unwrap_or(0.0) + weights.gamma * tex.unwrap_or(0.0);
    Ok(LossBreakdown {
        si_mse,
        hinge,
        texture: tex,
        total,
    })
}
