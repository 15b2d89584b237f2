use crate::error::{Error, Result};

use super::buffer::{LinearImage, Rect};

/// Source coordinate for output index `i` with corners aligned.
#[inline]
fn source_coord(i: usize, src: usize, dst: usize) -> (usize, usize, f64) {
    if dst == 1 || src == 1 {
        return (0, 0, 0.0);
    }
    let s = i as f64 * (src - 1) as f64 / (dst - 1) as f64;
    let i0 = (s.floor() as usize).min(src - 1);
    let i1 = (i0 + 1).min(src - 1);
    (i0, i1, s - i0 as f64)
}

/// Bilinear resampling with aligned corners; same-size input is returned
/// unchanged.
pub fn resample_bilinear(img: &LinearImage, new_w: usize, new_h: usize) -> Result<LinearImage> {
    if (img.width(), img.height()) == (new_w, new_h) && new_w > 0 && new_h > 0 {
        return Ok(img.clone());
    }
    resample_bilinear_window(img, new_w, new_h, Rect::new(0, 0, new_w, new_h))
}

/// The `window` crop of `resample_bilinear(img, new_w, new_h)`, computed
/// without resampling the rest of the image.
pub fn resample_bilinear_window(img: &LinearImage, new_w: usize, new_h: usize, window: Rect) -> Result<LinearImage> {
    if new_w == 0 || new_h == 0 {
        return Err(Error::Parameter(format!(
            "resample target must be at least 1x1, got {new_w}x{new_h}"
        )));
    }
    if window.w == 0 || window.h == 0 || window.x0 + window.w > new_w || window.y0 + window.h > new_h {
        return Err(Error::Parameter(format!(
            "window {window:?} outside the {new_w}x{new_h} target"
        )));
    }
    let (w, h) = img.dims();
    let cols: Vec<_> = (window.x0..window.x0 + window.w)
        .map(|x| source_coord(x, w, new_w))
        .collect();
    let src = img.data();
    let mut data = Vec::with_capacity(window.w * window.h * 3);
    for y in window.y0..window.y0 + window.h {
        let (y0, y1, fy) = source_coord(y, h, new_h);
        for &(x0, x1, fx) in &cols {
            for c in 0..3 {
                let p00 = src[(y0 * w + x0) * 3 + c];
                let p01 = src[(y0 * w + x1) * 3 + c];
                let p10 = src[(y1 * w + x0) * 3 + c];
                let p11 = src[(y1 * w + x1) * 3 + c];
                let top = p00 + (p01 - p00) * fx;
                let bottom = p10 + (p11 - p10) * fx;
                data.push((top + (bottom - top) * fy).max(0.0));
            }
        }
    }
    Ok(LinearImage::from_raw(window.w, window.h, data))
}
