use std::path::Path;

use crate::error::{Error, Result};
use crate::imagecore::{rasterize_polygons, read_mask, LinearImage, PixelMask};

use super::manifest::{ImageRecord, MaskSource, Measurement};

/// A region mask paired with its measured albedo.
#[derive(Debug, Clone)]
pub struct ResolvedRegion {
    pub mask: PixelMask,
    pub measurement: Measurement,
    pub pixel_count: usize,
}

/// Rasterizes or loads every region of `img` at `width`×`height`.
///
/// Pixels claimed by more than one region stay with the earliest-listed
/// region, so the returned masks are pairwise disjoint.
pub fn resolve_region_masks(
    img: &ImageRecord,
    measurements: &[Measurement],
    base_dir: &Path,
    width: usize,
    height: usize,
) -> Result<Vec<ResolvedRegion>> {
    let mut claimed = PixelMask::empty(width, height);
    let mut out = Vec::with_capacity(img.regions.len());
    for (i, region) in img.regions.iter().enumerate() {
        let measurement = measurements
            .iter()
            .find(|m| m.measurement_id == region.measurement_id)
            .ok_or_else(|| {
                Error::Annotation(format!("unknown measurement_id '{}'", region.measurement_id))
            })?
            .clone();
        let raw = match &region.source {
            MaskSource::Polygons { polygons } => rasterize_polygons(polygons, width, height)?,
            MaskSource::MaskFile { mask_file } => {
                let path = if mask_file.is_absolute() {
                    mask_file.clone()
                } else {
                    base_dir.join(mask_file)
                };
                let m = read_mask(&path)?;
                if m.dims() != (width, height) {
                    return Err(Error::Annotation(format!(
                        "mask {} is {:?}, expected {:?}",
                        path.display(),
                        m.dims(),
                        (width, height)
                    )));
                }
                m
            }
        };
        let mask = raw.and_not(&claimed)?;
        let pixel_count = mask.count();
        if pixel_count == 0 {
            return Err(Error::Annotation(format!(
                "region {i} ('{}') is empty after rasterization",
                region.measurement_id
            )));
        }
        claimed = claimed.or(&mask)?;
        out.push(ResolvedRegion {
            mask,
            measurement,
            pixel_count,
        });
    }
    Ok(out)
}

/// Per-channel mean of `pred` over `mask`.
pub fn region_mean(pred: &LinearImage, mask: &PixelMask) -> Result<[f64; 3]> {
    if pred.dims() != mask.dims() {
        return Err(Error::Parameter(format!(
            "prediction {:?} and mask {:?} differ in size",
            pred.dims(),
            mask.dims()
        )));
    }
    let data = pred.data();
    let mut sum = [0.0; 3];
    let mut n = 0usize;
    for i in mask.indices() {
        for c in 0..3 {
            sum[c] += data[i * 3 + c];
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::DegenerateInput("region mask is empty".into()));
    }
    Ok(sum.map(|s| s / n as f64))
}

/// Union of all region masks (the sparse measurement mask).
pub fn union_mask(regions: &[ResolvedRegion], width: usize, height: usize) -> PixelMask {
    let mut out = PixelMask::empty(width, height);
    for r in regions {
        for i in r.mask.indices() {
            out.set(i % width, i / width, true);
        }
    }
    out
}

/// Paints each region's measured albedo into an otherwise black image.
pub fn paint_albedo(regions: &[ResolvedRegion], width: usize, height: usize) -> LinearImage {
    let mut data = vec![0.0; width * height * 3];
    for r in regions {
        for i in r.mask.indices() {
            data[i * 3..i * 3 + 3].copy_from_slice(&r.measurement.albedo);
        }
    }
    LinearImage::new(width, height, data).expect("measured albedos are validated positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::manifest::RegionAnnotation;
    use crate::imagecore::{Polygon, Transfer};

    fn record(regions: Vec<RegionAnnotation>) -> ImageRecord {
        ImageRecord {
            image_id: "img".into(),
            file: "img.png".into(),
            transfer: Transfer::Srgb,
            regions,
            judgements: vec![],
            constant_shading_polygons: vec![],
            specular_polygons: vec![],
        }
    }

    fn poly_region(id: &str, p: Polygon) -> RegionAnnotation {
        RegionAnnotation {
            measurement_id: id.into(),
            source: MaskSource::Polygons { polygons: vec![p] },
        }
    }

    fn meas(id: &str) -> Measurement {
        Measurement {
            measurement_id: id.into(),
            albedo: [0.5, 0.4, 0.3],
        }
    }

    #[test]
    fn full_frame_region() {
        let img = record(vec![poly_region("a", Polygon::rect(0.0, 0.0, 4.0, 4.0))]);
        let r = resolve_region_masks(&img, &[meas("a")], Path::new("."), 4, 4).unwrap();
        assert_eq!(r[0].pixel_count, 16);
    }

    #[test]
    fn disjoint_squares() {
        let img = record(vec![
            poly_region("a", Polygon::rect(0.0, 0.0, 3.0, 3.0)),
            poly_region("b", Polygon::rect(4.0, 4.0, 8.0, 6.0)),
        ]);
        let r = resolve_region_masks(&img, &[meas("a"), meas("b")], Path::new("."), 8, 8).unwrap();
        assert_eq!((r[0].pixel_count, r[1].pixel_count), (9, 8));
        assert!(r[0].mask.and(&r[1].mask).unwrap().is_empty());
    }

    /// Expected counts from explicit set difference of the raw masks.
    #[test]
    fn overlap_goes_to_first_region() {
        let (pa, pb) = (Polygon::rect(0.0, 0.0, 5.0, 5.0), Polygon::rect(3.0, 2.0, 8.0, 7.0));
        let img = record(vec![poly_region("a", pa.clone()), poly_region("b", pb.clone())]);
        let r = resolve_region_masks(&img, &[meas("a"), meas("b")], Path::new("."), 10, 10).unwrap();
        let ra = rasterize_polygons(&[pa], 10, 10).unwrap();
        let rb = rasterize_polygons(&[pb], 10, 10).unwrap();
        let expected_b = (0..100).filter(|i| rb.data()[*i] && !ra.data()[*i]).count();
        assert_eq!(r[0].pixel_count, 25);
        assert_eq!(r[1].pixel_count, expected_b);
        assert_eq!(expected_b, 25 - 6);
    }

    #[test]
    fn empty_region_rejected() {
        let img = record(vec![poly_region("a", Polygon::rect(20.0, 20.0, 30.0, 30.0))]);
        assert!(matches!(
            resolve_region_masks(&img, &[meas("a")], Path::new("."), 8, 8),
            Err(Error::Annotation(_))
        ));
    }

    #[test]
    fn mean_of_two_pixels() {
        let img = LinearImage::new(2, 1, vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let m = PixelMask::full(2, 1);
        assert_eq!(region_mean(&img, &m).unwrap(), [0.5, 0.5, 0.5]);
        assert!(matches!(
            region_mean(&img, &PixelMask::empty(2, 1)),
            Err(Error::DegenerateInput(_))
        ));
    }
}
