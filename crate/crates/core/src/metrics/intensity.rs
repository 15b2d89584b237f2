use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagecore::gray_value;

use super::{ScaleTarget, SkipReason};

/// Mean predicted albedo `V_i`, measured albedo `G_i` and pixel count `|M_i|`
/// of one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub pred: [f64; 3],
    pub gt: [f64; 3],
    pub pixels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiMse {
    pub value: f64,
    /// Fitted scale θ̂.
    pub scale: f64,
}

/// Region-wise scale-invariant MSE on grayscale albedo.
///
/// With [`ScaleTarget::Gt`] the measured albedos are scaled:
/// `θ̂ = Σ|M_i| V_i G_i / Σ|M_i| G_i²` and the error is
/// `Σ|M_i| (V_i − θ̂ G_i)² / Σ|M_i|`. [`ScaleTarget::Pred`] swaps roles.
pub fn intensity_si_mse(regions: &[RegionSample], target: ScaleTarget) -> Result<SiMse> {
    if regions.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::NoRegions));
    }
    let samples: Vec<(f64, f64, f64)> = regions
        .iter()
        .map(|r| (gray_value(r.pred), gray_value(r.gt), r.pixels as f64))
        .collect();
    let total: f64 = samples.iter().map(|s| s.2).sum();
    let cross: f64 = samples.iter().map(|(v, g, n)| n * v * g).sum();
    let (scaled, reference): (fn(&(f64, f64, f64)) -> f64, fn(&(f64, f64, f64)) -> f64) = match target {
        ScaleTarget::Gt => (|s| s.1, |s| s.0),
        ScaleTarget::Pred => (|s| s.0, |s| s.1),
    };
    let energy: f64 = samples.iter().map(|s| s.2 * scaled(s) * scaled(s)).sum();
    if total <= 0.0 || energy <= 0.0 {
        return Err(Error::MetricAbsent(SkipReason::DegenerateScale));
    }
    let scale = cross / energy;
    let value = samples
        .iter()
        .map(|s| {
            let r = reference(s) - scale * scaled(s);
            s.2 * r * r
        })
        .sum::<f64>()
        / total;
    Ok(SiMse { value, scale })
}
