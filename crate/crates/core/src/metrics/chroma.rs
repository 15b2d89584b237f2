use crate::error::{Error, Result};
use crate::imagecore::{ciede2000, gray_value, linear_srgb_to_lab};

use super::{RegionSample, SkipReason};

const DEGENERATE_GRAY: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChromaResult {
    /// Pixel-weighted mean ΔE00.
    pub value: f64,
    /// Regions skipped because prediction or measurement is black.
    pub degenerate_regions: usize,
}

/// Pixel-weighted mean of `ΔE00(V_i, θ_i G_i)` with `θ_i = V_i^gray / G_i^gray`,
/// so only chromaticity differs between the operands.
pub fn chromaticity_error(regions: &[RegionSample]) -> Result<ChromaResult> {
    let mut weighted = 0.0;
    let mut total = 0.0;
    let mut degenerate = 0;
    for r in regions {
        let vg = gray_value(r.pred);
        let gg = gray_value(r.gt);
        if vg <= DEGENERATE_GRAY || gg <= DEGENERATE_GRAY {
            degenerate += 1;
            continue;
        }
        let theta = vg / gg;
        let scaled_gt = r.gt.map(|c| c * theta);
        let de = ciede2000(linear_srgb_to_lab(r.pred), linear_srgb_to_lab(scaled_gt));
        weighted += r.pixels as f64 * de;
        total += r.pixels as f64;
    }
    if total == 0.0 {
        let reason = if regions.is_empty() {
            SkipReason::NoRegions
        } else {
            SkipReason::DegenerateRegions
        };
        return Err(Error::MetricAbsent(reason));
    }
    Ok(ChromaResult {
        value: weighted / total,
        degenerate_regions: degenerate,
    })
}
