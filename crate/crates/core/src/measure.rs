//! Gray-card albedo measurement and ground-truth shading.
//!
//! A capture pair shares camera and lighting; the only difference is a gray
//! card of known reflectance lying on the surface. Under the card the image
//! is `A_proxy · S`, without it `A_region · S`, so the shading cancels.

use crate::error::{Error, Result};
use crate::imagecore::{
    masked_gaussian_blur, rasterize_polygons, srgb_encode_value, LinearImage, PixelMask, Polygon,
};

pub const DEFAULT_PROXY_ALBEDO: f64 = 0.18;
const MIN_PROXY_MEAN: f64 = 1e-6;
const ALBEDO_EPS: f64 = 1e-6;
const SUSPICIOUS_ALBEDO: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct GrayCardCapture {
    pub image_with_proxy: LinearImage,
    pub image_without_proxy: LinearImage,
    pub proxy_mask: PixelMask,
    pub proxy_albedo: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionAlbedo {
    pub albedo: [f64; 3],
    pub warnings: Vec<String>,
}

fn masked_mean(img: &LinearImage, mask: &PixelMask) -> [f64; 3] {
    let mut sum = [0.0; 3];
    let mut n = 0usize;
    for i in mask.indices() {
        for c in 0..3 {
            sum[c] += img.data()[i * 3 + c];
        }
        n += 1;
    }
    sum.map(|s| s / n as f64)
}

/// `A_region = A_proxy · mean(I_region) / mean(I_proxy)` per channel.
pub fn measure_region_albedo(cap: &GrayCardCapture) -> Result<RegionAlbedo> {
    if cap.image_with_proxy.dims() != cap.image_without_proxy.dims()
        || cap.image_with_proxy.dims() != cap.proxy_mask.dims()
    {
        return Err(Error::Measurement(format!(
            "capture sizes differ: with {:?}, without {:?}, mask {:?}",
            cap.image_with_proxy.dims(),
            cap.image_without_proxy.dims(),
            cap.proxy_mask.dims()
        )));
    }
    if cap.proxy_mask.is_empty() {
        return Err(Error::Measurement("proxy mask is empty".into()));
    }
    if !(cap.proxy_albedo > 0.0 && cap.proxy_albedo < 1.0) {
        return Err(Error::Measurement(format!(
            "proxy albedo must lie in (0, 1), got {}",
            cap.proxy_albedo
        )));
    }
    let proxy = masked_mean(&cap.image_with_proxy, &cap.proxy_mask);
    let region = masked_mean(&cap.image_without_proxy, &cap.proxy_mask);
    if let Some(c) = proxy.iter().position(|v| *v < MIN_PROXY_MEAN) {
        return Err(Error::Measurement(format!(
            "gray card mean in channel {c} is {:.3e}, too dark to measure",
            proxy[c]
        )));
    }
    let mut albedo = [0.0; 3];
    let mut warnings = Vec::new();
    for c in 0..3 {
        let shading = proxy[c] / cap.proxy_albedo;
        albedo[c] = region[c] / shading;
        if albedo[c] > SUSPICIOUS_ALBEDO {
            warnings.push(format!(
                "channel {c} albedo {:.3} exceeds {SUSPICIOUS_ALBEDO}; check exposure or specularity",
                albedo[c]
            ));
        }
    }
    Ok(RegionAlbedo { albedo, warnings })
}

/// Blurred ground-truth shading.
#[derive(Debug, Clone)]
pub struct ShadingGT {
    pub shading: LinearImage,
    /// Pixels where shading was derived; the blur is normalized over these.
    pub support: PixelMask,
    /// Pixels scored by the shading metric; a subset of `support`.
    pub mask: PixelMask,
    pub sigma: f64,
}

impl ShadingGT {
    /// Restricts the scored pixels to `mask ∧ support`.
    pub fn with_metric_mask(mut self, mask: &PixelMask) -> Result<Self> {
        self.mask = self.support.and(mask)?;
        Ok(self)
    }
}

/// `S = I / A` on `regions` where `A > 1e-6`, then a mask-normalized
/// Gaussian blur of width `sigma`.
pub fn derive_shading(
    img: &LinearImage,
    albedo: &LinearImage,
    regions: &PixelMask,
    sigma: f64,
) -> Result<ShadingGT> {
    if img.dims() != albedo.dims() || img.dims() != regions.dims() {
        return Err(Error::Parameter(format!(
            "image {:?}, albedo {:?} and region mask {:?} must match",
            img.dims(),
            albedo.dims(),
            regions.dims()
        )));
    }
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("shading blur sigma must be > 0, got {sigma}")));
    }
    let (w, h) = img.dims();
    let mut support = PixelMask::empty(w, h);
    let mut raw = vec![0.0; w * h * 3];
    for i in regions.indices() {
        let a = &albedo.data()[i * 3..i * 3 + 3];
        if a.iter().all(|v| *v > ALBEDO_EPS) {
            for c in 0..3 {
                raw[i * 3 + c] = img.data()[i * 3 + c] / a[c];
            }
            support.set(i % w, i / w, true);
        }
    }
    if support.is_empty() {
        return Err(Error::DegenerateInput("no region pixel with positive albedo".into()));
    }
    let raw = LinearImage::new(w, h, raw)?;
    let shading = masked_gaussian_blur(&raw, &support, sigma)?;
    Ok(ShadingGT {
        shading,
        mask: support.clone(),
        support,
        sigma,
    })
}

/// Sparse ∧ non-specular ∧ non-saturated. A pixel is saturated when any
/// channel, sRGB-encoded and quantized to 8 bits, reaches `threshold`.
pub fn build_shading_mask(
    sparse: &PixelMask,
    specular_polys: &[Polygon],
    img: &LinearImage,
    threshold: u8,
) -> Result<PixelMask> {
    let (w, h) = img.dims();
    if sparse.dims() != (w, h) {
        return Err(Error::Parameter(format!(
            "sparse mask {:?} does not match image {:?}",
            sparse.dims(),
            (w, h)
        )));
    }
    let specular = rasterize_polygons(specular_polys, w, h)?;
    let non_saturated = non_saturation_mask(img, threshold);
    sparse.and_not(&specular)?.and(&non_saturated)
}

pub fn non_saturation_mask(img: &LinearImage, threshold: u8) -> PixelMask {
    let (w, h) = img.dims();
    PixelMask::new(
        w,
        h,
        img.pixels()
            .map(|p| p.iter().all(|v| ((srgb_encode_value(*v) * 255.0).round() as u32) < threshold as u32))
            .collect(),
    )
    .expect("one flag per pixel")
}
