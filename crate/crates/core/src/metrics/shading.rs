use crate::error::{Error, Result};
use crate::imagecore::{masked_gaussian_blur, LinearImage};
use crate::measure::ShadingGT;

use super::{ScaleTarget, SiMse, SkipReason};

const DEGENERATE_ENERGY: f64 = 1e-12;

/// Sparse shading si-MSE.
///
/// The prediction is blurred with the ground truth's σ, normalized over the
/// ground-truth support, then one scale shared by all channels is fitted on
/// `gt.mask`. With [`ScaleTarget::Pred`] the error is
/// `Σ_M (Ŝ_gt − θ̂ Ŝ_pred)² / (3 |M|)`.
pub fn sparse_shading_si_mse(gt: &ShadingGT, pred: &LinearImage, target: ScaleTarget) -> Result<SiMse> {
    if pred.dims() != gt.shading.dims() {
        return Err(Error::Parameter(format!(
            "predicted shading {:?} does not match ground truth {:?}",
            pred.dims(),
            gt.shading.dims()
        )));
    }
    if gt.mask.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::EmptyShadingMask));
    }
    let blurred = masked_gaussian_blur(pred, &gt.support, gt.sigma)?;
    let (g, p) = (gt.shading.data(), blurred.data());
    let mut gt_vals = Vec::with_capacity(gt.mask.count() * 3);
    let mut pred_vals = Vec::with_capacity(gt.mask.count() * 3);
    for i in gt.mask.indices() {
        gt_vals.extend_from_slice(&g[i * 3..i * 3 + 3]);
        pred_vals.extend_from_slice(&p[i * 3..i * 3 + 3]);
    }
    fit_scaled_mse(&gt_vals, &pred_vals, target)
}

/// One-scale least-squares fit followed by the mean squared residual.
fn fit_scaled_mse(gt: &[f64], pred: &[f64], target: ScaleTarget) -> Result<SiMse> {
    let (scaled, reference) = match target {
        ScaleTarget::Pred => (pred, gt),
        ScaleTarget::Gt => (gt, pred),
    };
    let energy: f64 = scaled.iter().map(|v| v * v).sum();
    if energy < DEGENERATE_ENERGY {
        return Err(Error::MetricAbsent(SkipReason::DegenerateScale));
    }
    let cross: f64 = scaled.iter().zip(reference).map(|(s, r)| s * r).sum();
    let scale = cross / energy;
    let value = scaled
        .iter()
        .zip(reference)
        .map(|(s, r)| (r - scale * s).powi(2))
        .sum::<f64>()
        / scaled.len() as f64;
    Ok(SiMse { value, scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagecore::PixelMask;
    use crate::measure::derive_shading;

    #[test]
    fn two_scalar_example() {
        let r = fit_scaled_mse(&[1.0, 2.0], &[1.0, 1.0], ScaleTarget::Pred).unwrap();
        let objective = |t: f64| ((1.0 - t).powi(2) + (2.0 - t).powi(2)) / 2.0;
        let best = (0..=30000).map(|i| i as f64 * 1e-4).min_by(|a, b| objective(*a).total_cmp(&objective(*b))).unwrap();
        assert!((best - 1.5).abs() < 1e-4);
        assert!((r.scale - 1.5).abs() < 1e-12);
        assert!((r.value - 0.25).abs() < 1e-12);
    }

    fn smooth_scene() -> (LinearImage, LinearImage, PixelMask) {
        let shading = LinearImage::from_fn(40, 30, |x, y| {
            let s = 0.3 + 0.02 * x as f64 + 0.01 * y as f64;
            [s, 0.9 * s, 0.8 * s]
        })
        .unwrap();
        let albedo = LinearImage::filled(40, 30, [0.5, 0.4, 0.3]).unwrap();
        let mask = PixelMask::from_fn(40, 30, |x, y| (5..35).contains(&x) && (4..26).contains(&y));
        (shading, albedo, mask)
    }

    #[test]
    fn scaled_truth_scores_zero() {
        let (shading, albedo, mask) = smooth_scene();
        let img = LinearImage::from_fn(40, 30, |x, y| {
            let (s, a) = (shading.pixel(x, y), albedo.pixel(x, y));
            [s[0] * a[0], s[1] * a[1], s[2] * a[2]]
        })
        .unwrap();
        let gt = derive_shading(&img, &albedo, &mask, 3.0).unwrap();
        for c in [0.2, 1.0, 7.5] {
            let r = sparse_shading_si_mse(&gt, &shading.scaled(c).unwrap(), ScaleTarget::Pred).unwrap();
            assert!(r.value < 1e-8, "c={c}: {}", r.value);
        }
    }

    #[test]
    fn errors_outside_support_are_ignored() {
        let (shading, albedo, mask) = smooth_scene();
        let img = LinearImage::from_fn(40, 30, |x, y| {
            let (s, a) = (shading.pixel(x, y), albedo.pixel(x, y));
            [s[0] * a[0], s[1] * a[1], s[2] * a[2]]
        })
        .unwrap();
        let gt = derive_shading(&img, &albedo, &mask, 2.0).unwrap();
        let mut data = shading.data().to_vec();
        data[0..3].copy_from_slice(&[9.0, 9.0, 9.0]);
        let pred = LinearImage::new(40, 30, data).unwrap();
        let r = sparse_shading_si_mse(&gt, &pred, ScaleTarget::Pred).unwrap();
        assert!(r.value < 1e-20);
    }

    #[test]
    fn empty_mask_is_absent() {
        let (shading, albedo, mask) = smooth_scene();
        let gt = derive_shading(&shading, &albedo, &mask, 2.0)
            .unwrap()
            .with_metric_mask(&PixelMask::empty(40, 30))
            .unwrap();
        assert!(matches!(
            sparse_shading_si_mse(&gt, &shading, ScaleTarget::Pred),
            Err(Error::MetricAbsent(SkipReason::EmptyShadingMask))
        ));
    }
}
