//! Separable Gaussian blur with half-sample symmetric (reflection) padding.
//!
//! With a symmetric kernel and symmetric padding the 1-D operator is a
//! symmetric, row-stochastic matrix, so it is also column-stochastic and
//! the image mean is preserved.

use crate::error::{Error, Result};

use super::buffer::{GrayImage, LinearImage, PixelMask};

/// Normalized taps for offsets `-r..=r`, `r = ceil(3σ)`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Parameter(format!("blur sigma must be > 0, got {sigma}")));
    }
    let r = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-r..=r)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= s);
    Ok(k)
}

#[inline]
fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let m = i.rem_euclid(2 * n);
    (if m >= n { 2 * n - 1 - m } else { m }) as usize
}

fn pad_line(src: &[f64], n: usize, r: usize, padded: &mut Vec<f64>) {
    padded.clear();
    if n > r {
        padded.extend((0..r).map(|i| src[reflect(i as isize - r as isize, n)]));
        padded.extend_from_slice(&src[..n]);
        padded.extend((n..n + r).map(|i| src[reflect(i as isize, n)]));
    } else {
        padded.extend((0..n + 2 * r).map(|i| src[reflect(i as isize - r as isize, n)]));
    }
}

/// Blurs one plane stored row-major.
pub(crate) fn blur_plane(data: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let r = kernel.len() / 2;
    let mut tmp = vec![0.0; width * height];
    let mut padded = Vec::with_capacity(width + 2 * r);
    for y in 0..height {
        pad_line(&data[y * width..(y + 1) * width], width, r, &mut padded);
        let row = &mut tmp[y * width..(y + 1) * width];
        for (t, kv) in kernel.iter().enumerate() {
            for (o, s) in row.iter_mut().zip(&padded[t..t + width]) {
                *o += kv * s;
            }
        }
    }
    // Both passes accumulate whole shifted rows, one tap at a time.
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        let row = &mut out[y * width..(y + 1) * width];
        for (t, kv) in kernel.iter().enumerate() {
            let sy = reflect(y as isize + t as isize - r as isize, height);
            let src = &tmp[sy * width..(sy + 1) * width];
            for (o, s) in row.iter_mut().zip(src) {
                *o += kv * s;
            }
        }
    }
    out
}

pub fn gaussian_blur_gray(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    let k = gaussian_kernel(sigma)?;
    Ok(GrayImage::from_raw(
        img.width(),
        img.height(),
        blur_plane(img.data(), img.width(), img.height(), &k),
    ))
}

pub fn gaussian_blur(img: &LinearImage, sigma: f64) -> Result<LinearImage> {
    let k = gaussian_kernel(sigma)?;
    let (w, h) = img.dims();
    let planes: Vec<Vec<f64>> = (0..3)
        .map(|c| blur_plane(img.channel(c).data(), w, h, &k))
        .collect();
    let mut data = Vec::with_capacity(w * h * 3);
    for i in 0..w * h {
        for p in &planes {
            data.push(p[i].max(0.0));
        }
    }
    Ok(LinearImage::from_raw(w, h, data))
}

/// `blur(img · M) / blur(M)` inside `mask`, zero outside it. Pixels outside
/// the mask never contribute to pixels inside.
pub fn masked_gaussian_blur(img: &LinearImage, mask: &PixelMask, sigma: f64) -> Result<LinearImage> {
    if img.dims() != mask.dims() {
        return Err(Error::Parameter(format!(
            "image {:?} and mask {:?} differ in size",
            img.dims(),
            mask.dims()
        )));
    }
    let k = gaussian_kernel(sigma)?;
    let (w, h) = img.dims();
    let weight = blur_plane(mask.as_f64().data(), w, h, &k);
    let mut data = vec![0.0; w * h * 3];
    for c in 0..3 {
        let masked: Vec<f64> = img
            .data()
            .iter()
            .skip(c)
            .step_by(3)
            .zip(mask.data())
            .map(|(v, m)| if *m { *v } else { 0.0 })
            .collect();
        let num = blur_plane(&masked, w, h, &k);
        for i in 0..w * h {
            if mask.data()[i] && weight[i] > 0.0 {
                data[i * 3 + c] = (num[i] / weight[i]).max(0.0);
            }
        }
    }
    Ok(LinearImage::from_raw(w, h, data))
}
