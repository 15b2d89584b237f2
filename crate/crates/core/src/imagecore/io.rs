//! PNG (8/16-bit) and OpenEXR (32-bit float) decode/encode.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Luma, Rgb};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::buffer::{LinearImage, PixelMask};
use super::color::{srgb_decode_value, srgb_encode_value};

/// Transfer function a stored file was written with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transfer {
    Srgb,
    Linear,
}

impl std::str::FromStr for Transfer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srgb" => Ok(Transfer::Srgb),
            "linear" => Ok(Transfer::Linear),
            _ => Err(Error::Parameter(format!("transfer must be 'srgb' or 'linear', got '{s}'"))),
        }
    }
}

fn open(path: &Path) -> Result<DynamicImage> {
    if !path.exists() {
        return Err(Error::io(path, std::io::Error::from(std::io::ErrorKind::NotFound)));
    }
    image::open(path).map_err(|e| Error::image(path, e))
}

pub fn image_dimensions(path: &Path) -> Result<(usize, usize)> {
    let (w, h) = image::image_dimensions(path).map_err(|e| Error::image(path, e))?;
    Ok((w as usize, h as usize))
}

/// Reads an RGB(A) file into linear RGB. Alpha is dropped; negative floats
/// are clamped to zero.
pub fn read_linear_image(path: &Path, transfer: Transfer) -> Result<LinearImage> {
    let rgb = open(path)?.to_rgb32f();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let mut data = Vec::with_capacity(w * h * 3);
    for v in rgb.into_raw() {
        let v = v as f64;
        if !v.is_finite() {
            return Err(Error::image(path, "non-finite pixel value"));
        }
        data.push(match transfer {
            Transfer::Linear => v.max(0.0),
            Transfer::Srgb => {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InputRange(format!(
                        "{}: sRGB-encoded value {v} outside [0, 1]",
                        path.display()
                    )));
                }
                srgb_decode_value(v)
            }
        });
    }
    LinearImage::new(w, h, data)
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    Ok(())
}

/// 32-bit float OpenEXR, linear values.
pub fn write_exr(path: &Path, img: &LinearImage) -> Result<()> {
    ensure_parent(path)?;
    let buf: ImageBuffer<Rgb<f32>, Vec<f32>> = ImageBuffer::from_raw(
        img.width() as u32,
        img.height() as u32,
        img.data().iter().map(|v| *v as f32).collect(),
    )
    .expect("buffer length matches dimensions");
    DynamicImage::ImageRgb32F(buf)
        .save_with_format(path, image::ImageFormat::OpenExr)
        .map_err(|e| Error::image(path, e))
}

/// 16-bit PNG, either sRGB-encoded or storing linear values directly.
/// Values are clamped to [0, 1].
pub fn write_png16(path: &Path, img: &LinearImage, transfer: Transfer) -> Result<()> {
    ensure_parent(path)?;
    let data = img
        .data()
        .iter()
        .map(|v| {
            let e = match transfer {
                Transfer::Srgb => srgb_encode_value(*v),
                Transfer::Linear => v.clamp(0.0, 1.0),
            };
            (e * 65535.0).round() as u16
        })
        .collect();
    let buf: ImageBuffer<Rgb<u16>, Vec<u16>> =
        ImageBuffer::from_raw(img.width() as u32, img.height() as u32, data).expect("buffer length");
    buf.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::image(path, e))
}

/// 8-bit PNG with 255 for set pixels.
pub fn write_mask_png(path: &Path, mask: &PixelMask) -> Result<()> {
    ensure_parent(path)?;
    let data = mask.data().iter().map(|b| if *b { 255u8 } else { 0 }).collect();
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_raw(mask.width() as u32, mask.height() as u32, data).expect("buffer length");
    buf.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::image(path, e))
}

/// Any non-zero luma counts as set.
pub fn read_mask(path: &Path) -> Result<PixelMask> {
    let luma = open(path)?.to_luma16();
    let (w, h) = (luma.width() as usize, luma.height() as usize);
    PixelMask::new(w, h, luma.into_raw().into_iter().map(|v| v > 0).collect())
}
