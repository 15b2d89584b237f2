use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagecore::{
    largest_inscribed_rect, rasterize_polygons, resample_bilinear_window, srgb_encode_buffer, LinearImage, PixelMask,
    Polygon, Rect,
};
use crate::perceptual::PerceptualDistance;

use super::SkipReason;

/// A channel mean below this cannot be rescaled; the channel is replaced by
/// the image crop's flat mean instead.
const FLAT_CHANNEL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextureParams {
    /// Integer upsampling applied to both images before cropping.
    pub upsample: usize,
    /// Rectangles with a side shorter than this (after upsampling) are dropped.
    pub min_side: usize,
    /// sRGB-encode crops before handing them to the backend.
    pub encode_srgb: bool,
}

impl Default for TextureParams {
    fn default() -> Self {
        Self {
            upsample: 2,
            min_side: 32,
            encode_srgb: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextureResult {
    /// Area-weighted mean backend distance.
    pub value: f64,
    pub rectangles: Vec<Rect>,
}

/// Texture error over constant-shading polygons given at `image` resolution.
pub fn texture_error(
    image: &LinearImage,
    pred_albedo: &LinearImage,
    polys: &[Polygon],
    backend: &dyn PerceptualDistance,
    params: &TextureParams,
) -> Result<TextureResult> {
    if image.dims() != pred_albedo.dims() {
        return Err(Error::Parameter(format!(
            "image {:?} and albedo {:?} differ in size",
            image.dims(),
            pred_albedo.dims()
        )));
    }
    if params.upsample == 0 {
        return Err(Error::Parameter("texture upsample factor must be >= 1".into()));
    }
    if polys.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::NoRectangles));
    }
    let f = params.upsample;
    let (w, h) = (image.width() * f, image.height() * f);
    let masks = polys
        .iter()
        .map(|p| rasterize_polygons(std::slice::from_ref(&p.scaled(f as f64, f as f64)), w, h))
        .collect::<Result<Vec<_>>>()?;
    let rects = surviving_rects(&masks, params.min_side)?;
    // Only the crops are ever read, so upsample just those windows.
    let crops = rects
        .iter()
        .map(|r| {
            Ok((
                resample_bilinear_window(image, w, h, *r)?,
                resample_bilinear_window(pred_albedo, w, h, *r)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    score_crops(rects, crops, backend, params.encode_srgb)
}

fn surviving_rects(masks: &[PixelMask], min_side: usize) -> Result<Vec<Rect>> {
    let rects: Vec<Rect> = masks
        .iter()
        .filter_map(largest_inscribed_rect)
        .filter(|r| r.w >= min_side && r.h >= min_side)
        .collect();
    if rects.is_empty() {
        return Err(Error::MetricAbsent(SkipReason::NoRectangles));
    }
    Ok(rects)
}

fn score_crops(
    rects: Vec<Rect>,
    crops: Vec<(LinearImage, LinearImage)>,
    backend: &dyn PerceptualDistance,
    encode_srgb: bool,
) -> Result<TextureResult> {
    let mut weighted = 0.0;
    let mut area = 0.0;
    for (r, (img_crop, pred_crop)) in rects.iter().zip(crops) {
        let pred_crop = match_channel_means(&pred_crop, img_crop.channel_means())?;
        let (a, b) = if encode_srgb {
            (srgb_encode_buffer(&img_crop), srgb_encode_buffer(&pred_crop))
        } else {
            (img_crop, pred_crop)
        };
        let d = backend.distance(&a, &b)?;
        weighted += r.area() as f64 * d;
        area += r.area() as f64;
    }
    Ok(TextureResult {
        value: weighted / area,
        rectangles: rects,
    })
}

/// Texture error with one mask per constant-shading region, already at the
/// working resolution.
pub fn texture_error_on_masks(
    image: &LinearImage,
    pred_albedo: &LinearImage,
    masks: &[PixelMask],
    backend: &dyn PerceptualDistance,
    min_side: usize,
    encode_srgb: bool,
) -> Result<TextureResult> {
    let rects = surviving_rects(masks, min_side)?;
    let crops = rects
        .iter()
        .map(|r| Ok((image.crop(*r)?, pred_albedo.crop(*r)?)))
        .collect::<Result<Vec<_>>>()?;
    score_crops(rects, crops, backend, encode_srgb)
}

fn match_channel_means(crop: &LinearImage, target: [f64; 3]) -> Result<LinearImage> {
    let means = crop.channel_means();
    let (w, h) = crop.dims();
    let mut data = crop.data().to_vec();
    for c in 0..3 {
        if means[c] <= FLAT_CHANNEL {
            data.iter_mut().skip(c).step_by(3).for_each(|v| *v = target[c]);
        } else {
            let s = target[c] / means[c];
            data.iter_mut().skip(c).step_by(3).for_each(|v| *v *= s);
        }
    }
    LinearImage::new(w, h, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagecore::gaussian_blur;
    use crate::perceptual::MsSsim;

    fn checker(w: usize, h: usize) -> LinearImage {
        LinearImage::from_fn(w, h, |x, y| {
            let v = 0.2 + 0.1 * ((x / 3 + y / 2) % 3) as f64 + 0.02 * ((x * 7 + y * 3) % 5) as f64;
            [v, 0.8 * v, 0.6 * v]
        })
        .unwrap()
    }

    #[test]
    fn identical_and_scaled_albedo_score_zero() {
        let img = checker(48, 40);
        let polys = [Polygon::rect(2.0, 2.0, 40.0, 38.0)];
        let b = MsSsim::default();
        let p = TextureParams::default();
        let same = texture_error(&img, &img, &polys, &b, &p).unwrap();
        assert!(same.value < 1e-12);
        let scaled = texture_error(&img, &img.scaled(0.37).unwrap(), &polys, &b, &p).unwrap();
        assert!(scaled.value < 1e-9, "{}", scaled.value);
        assert_eq!(same.rectangles, vec![Rect::new(4, 4, 76, 72)]);
    }

    #[test]
    fn blurred_albedo_scores_worse() {
        let img = checker(48, 40);
        let polys = [Polygon::rect(0.0, 0.0, 48.0, 40.0)];
        let b = MsSsim::default();
        let p = TextureParams::default();
        let mild = texture_error(&img, &gaussian_blur(&img, 0.5).unwrap(), &polys, &b, &p).unwrap();
        let heavy = texture_error(&img, &gaussian_blur(&img, 3.0).unwrap(), &polys, &b, &p).unwrap();
        assert!(heavy.value > mild.value);
    }

    #[test]
    fn small_regions_are_dropped() {
        let img = checker(48, 40);
        let polys = [Polygon::rect(0.0, 0.0, 15.0, 40.0)];
        assert!(matches!(
            texture_error(&img, &img, &polys, &MsSsim::default(), &TextureParams::default()),
            Err(Error::MetricAbsent(SkipReason::NoRectangles))
        ));
        assert!(matches!(
            texture_error(&img, &img, &[], &MsSsim::default(), &TextureParams::default()),
            Err(Error::MetricAbsent(SkipReason::NoRectangles))
        ));
    }
}
