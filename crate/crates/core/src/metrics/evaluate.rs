use crate::config::RunConfig;
use crate::dataset::{
    paint_albedo, region_mean, resolve_region_masks, union_mask, ImageRecord, JudgementPair, Manifest,
    ResolvedRegion, Scene,
};
use crate::error::Result;
use crate::imagecore::{read_linear_image, resample_bilinear, to_grayscale, LinearImage, Polygon};
use crate::measure::{build_shading_mask, derive_shading, ShadingGT};
use crate::perceptual::PerceptualDistance;

use super::{
    chromaticity_error, intensity_si_mse, sparse_shading_si_mse, texture_error, whdr, AlgorithmPrediction,
    ImageMetrics, MetricEntry, MetricKind, RegionSample, SkipReason,
};

/// Predicted albedo below this yields zero derived shading.
const DERIVED_SHADING_EPS: f64 = 1e-6;

/// Everything about one annotated image that does not depend on the
/// prediction. Build once, evaluate many prediction sets against it.
#[derive(Debug, Clone)]
pub struct ImageContext {
    pub image_id: String,
    pub image: LinearImage,
    pub regions: Vec<ResolvedRegion>,
    pub judgements: Vec<JudgementPair>,
    pub constant_shading: Vec<Polygon>,
    /// `None` when the image has no measured regions.
    pub shading_gt: Option<ShadingGT>,
}

impl ImageContext {
    pub fn load(manifest: &Manifest, scene: &Scene, record: &ImageRecord, config: &RunConfig) -> Result<Self> {
        let image = read_linear_image(&manifest.resolve(&record.file), record.transfer)?;
        let (w, h) = image.dims();
        let regions = resolve_region_masks(record, &scene.measurements, &manifest.base_dir, w, h)?;
        Self::new(
            record.image_id.clone(),
            image,
            regions,
            record.judgements.clone(),
            record.constant_shading_polygons.clone(),
            &record.specular_polygons,
            config,
        )
    }

    pub fn new(
        image_id: String,
        image: LinearImage,
        regions: Vec<ResolvedRegion>,
        judgements: Vec<JudgementPair>,
        constant_shading: Vec<Polygon>,
        specular: &[Polygon],
        config: &RunConfig,
    ) -> Result<Self> {
        let shading_gt = if regions.is_empty() || !config.wants(MetricKind::Shading) {
            None
        } else {
            let (w, h) = image.dims();
            let sparse = union_mask(&regions, w, h);
            let albedo = paint_albedo(&regions, w, h);
            let gt = derive_shading(&image, &albedo, &sparse, config.sigma)?;
            let mask = build_shading_mask(&sparse, specular, &image, config.saturation_threshold)?;
            Some(gt.with_metric_mask(&mask)?)
        };
        Ok(Self {
            image_id,
            image,
            regions,
            judgements,
            constant_shading,
            shading_gt,
        })
    }
}

/// `(V_i, G_i, |M_i|)` for every region.
pub fn region_samples(regions: &[ResolvedRegion], albedo: &LinearImage) -> Result<Vec<RegionSample>> {
    regions
        .iter()
        .map(|r| {
            Ok(RegionSample {
                pred: region_mean(albedo, &r.mask)?,
                gt: r.measurement.albedo,
                pixels: r.pixel_count,
            })
        })
        .collect()
}

fn derived_shading(image: &LinearImage, albedo: &LinearImage) -> Result<LinearImage> {
    let data = image
        .data()
        .iter()
        .zip(albedo.data())
        .map(|(i, a)| if *a > DERIVED_SHADING_EPS { i / a } else { 0.0 })
        .collect();
    LinearImage::new(image.width(), image.height(), data)
}

fn to_annotation_size(img: &LinearImage, w: usize, h: usize) -> Result<(LinearImage, bool)> {
    if img.dims() == (w, h) {
        Ok((img.clone(), false))
    } else {
        Ok((resample_bilinear(img, w, h)?, true))
    }
}

/// Scores one prediction. Metric failures are recorded per entry; this
/// never fails as a whole.
pub fn evaluate_image(
    ctx: &ImageContext,
    pred: &AlgorithmPrediction,
    config: &RunConfig,
    backend: &dyn PerceptualDistance,
) -> ImageMetrics {
    let (w, h) = ctx.image.dims();
    let not_requested = MetricEntry::skipped(SkipReason::NotRequested);
    let mut out = ImageMetrics {
        image_id: ctx.image_id.clone(),
        whdr: not_requested.clone(),
        intensity_si_mse: not_requested.clone(),
        chroma_error: not_requested.clone(),
        texture_error: not_requested.clone(),
        shading_si_mse: not_requested,
        derived_shading: false,
        resampled: false,
        intensity_scale: None,
        shading_scale: None,
        chroma_degenerate_regions: 0,
        texture_rectangles: 0,
    };
    let albedo = match to_annotation_size(&pred.albedo, w, h) {
        Ok((a, resampled)) => {
            out.resampled = resampled;
            a
        }
        Err(e) => {
            let failed = MetricEntry::from_result(Err(e));
            for kind in MetricKind::ALL.into_iter().filter(|k| config.wants(*k)) {
                *entry_mut(&mut out, kind) = failed.clone();
            }
            return out;
        }
    };

    if config.wants(MetricKind::Whdr) {
        out.whdr = MetricEntry::from_result(whdr(&to_grayscale(&albedo), &ctx.judgements, config.delta));
    }

    let samples = region_samples(&ctx.regions, &albedo);
    if config.wants(MetricKind::Intensity) {
        let r = samples.as_ref().map_err(clone_err).and_then(|s| {
            let r = intensity_si_mse(s, config.intensity_scale_target)?;
            out.intensity_scale = Some(r.scale);
            Ok(r.value)
        });
        out.intensity_si_mse = MetricEntry::from_result(r);
    }
    if config.wants(MetricKind::Chromaticity) {
        let r = samples.as_ref().map_err(clone_err).and_then(|s| {
            let r = chromaticity_error(s)?;
            out.chroma_degenerate_regions = r.degenerate_regions;
            Ok(r.value)
        });
        out.chroma_error = MetricEntry::from_result(r);
    }

    if config.wants(MetricKind::Texture) {
        let r = texture_error(&ctx.image, &albedo, &ctx.constant_shading, backend, &config.texture_params()).map(|t| {
            out.texture_rectangles = t.rectangles.len();
            t.value
        });
        out.texture_error = MetricEntry::from_result(r);
    }

    if config.wants(MetricKind::Shading) {
        out.shading_si_mse = match &ctx.shading_gt {
            None => MetricEntry::skipped(SkipReason::NoRegions),
            Some(gt) => {
                let shading = match &pred.shading {
                    Some(s) => to_annotation_size(s, w, h).map(|(s, _)| s),
                    None => {
                        out.derived_shading = true;
                        derived_shading(&ctx.image, &albedo)
                    }
                };
                MetricEntry::from_result(shading.and_then(|s| {
                    let r = sparse_shading_si_mse(gt, &s, config.shading_scale_target)?;
                    out.shading_scale = Some(r.scale);
                    Ok(r.value)
                }))
            }
        };
    }
    out
}

fn entry_mut(m: &mut ImageMetrics, kind: MetricKind) -> &mut MetricEntry {
    match kind {
        MetricKind::Whdr => &mut m.whdr,
        MetricKind::Intensity => &mut m.intensity_si_mse,
        MetricKind::Chromaticity => &mut m.chroma_error,
        MetricKind::Texture => &mut m.texture_error,
        MetricKind::Shading => &mut m.shading_si_mse,
    }
}

fn clone_err(e: &crate::Error) -> crate::Error {
    match e {
        crate::Error::MetricAbsent(r) => crate::Error::MetricAbsent(*r),
        other => crate::Error::DegenerateInput(other.to_string()),
    }
}
