//! Transfer functions, RGB primaries and CIELAB conversion.
//!
//! All matrices are built from the primaries' chromaticities and the D65
//! white point, so white maps to white exactly (up to rounding) in every
//! direction.

use crate::error::{Error, Result};

use super::buffer::{GrayImage, LinearImage};

/// Display-encoded RGB, values nominally in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl EncodedImage {
    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

#[inline]
pub fn srgb_decode_value(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

/// Clamps to [0, 1] first.
#[inline]
pub fn srgb_encode_value(v: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    if v == 1.0 {
        1.0
    } else if v <= 0.0031308 {
        v * 12.92
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

pub fn srgb_decode(encoded: &EncodedImage) -> Result<LinearImage> {
    if let Some(v) = encoded.data.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InputRange(format!(
            "sRGB-encoded values must lie in [0, 1], found {v}"
        )));
    }
    LinearImage::new(
        encoded.width,
        encoded.height,
        encoded.data.iter().map(|v| srgb_decode_value(*v)).collect(),
    )
}

pub fn srgb_encode(linear: &LinearImage) -> EncodedImage {
    EncodedImage {
        width: linear.width(),
        height: linear.height(),
        data: linear.data().iter().map(|v| srgb_encode_value(*v)).collect(),
    }
}

/// Same as [`srgb_encode`] but keeps the result as a [`LinearImage`]-typed
/// buffer, which is what the perceptual backends consume.
pub(crate) fn srgb_encode_buffer(linear: &LinearImage) -> LinearImage {
    LinearImage::from_raw(
        linear.width(),
        linear.height(),
        linear.data().iter().map(|v| srgb_encode_value(*v)).collect(),
    )
}

pub type Mat3 = [[f64; 3]; 3];

const D65_XY: [f64; 2] = [0.3127, 0.3290];
const SRGB_PRIMARIES: [[f64; 2]; 3] = [[0.64, 0.33], [0.30, 0.60], [0.15, 0.06]];
const ADOBE_PRIMARIES: [[f64; 2]; 3] = [[0.64, 0.33], [0.21, 0.71], [0.15, 0.06]];

#[inline]
pub fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn mat_inv(m: &Mat3) -> Mat3 {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let inv_det = 1.0 / det;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[i][j] = sign * minor * inv_det;
        }
    }
    out
}

fn xy_to_xyz([x, y]: [f64; 2]) -> [f64; 3] {
    [x / y, 1.0, (1.0 - x - y) / y]
}

fn rgb_to_xyz_matrix(primaries: &[[f64; 2]; 3]) -> Mat3 {
    let p = primaries.map(xy_to_xyz);
    let cols: Mat3 = [
        [p[0][0], p[1][0], p[2][0]],
        [p[0][1], p[1][1], p[2][1]],
        [p[0][2], p[1][2], p[2][2]],
    ];
    let s = mat_vec(&mat_inv(&cols), xy_to_xyz(D65_XY));
    let mut m = cols;
    for row in &mut m {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= s[j];
        }
    }
    m
}

pub fn srgb_to_xyz_matrix() -> Mat3 {
    rgb_to_xyz_matrix(&SRGB_PRIMARIES)
}

pub fn adobe_to_xyz_matrix() -> Mat3 {
    rgb_to_xyz_matrix(&ADOBE_PRIMARIES)
}

/// Linear Adobe RGB (D65) → linear sRGB (D65).
pub fn adobe_to_srgb_matrix() -> Mat3 {
    mat_mul(&mat_inv(&srgb_to_xyz_matrix()), &adobe_to_xyz_matrix())
}

#[derive(Debug, Clone)]
pub struct GamutConversion {
    pub image: LinearImage,
    /// Number of channel values that fell below zero and were clamped.
    pub clipped: usize,
}

pub fn adobe_linear_to_srgb_linear(img: &LinearImage) -> GamutConversion {
    let m = adobe_to_srgb_matrix();
    let mut clipped = 0;
    let mut data = Vec::with_capacity(img.data().len());
    for p in img.pixels() {
        for v in mat_vec(&m, p) {
            if v < 0.0 {
                clipped += 1;
                data.push(0.0);
            } else {
                data.push(v);
            }
        }
    }
    GamutConversion {
        image: LinearImage::from_raw(img.width(), img.height(), data),
        clipped,
    }
}

#[inline]
pub fn gray_value(p: [f64; 3]) -> f64 {
    (p[0] + p[1] + p[2]) / 3.0
}

/// Per-pixel mean of the three channels.
pub fn to_grayscale(img: &LinearImage) -> GrayImage {
    GrayImage::from_raw(img.width(), img.height(), img.pixels().map(gray_value).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub fn new(l: f64, a: f64, b: f64) -> Self {
        Self { l, a, b }
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// Linear sRGB → XYZ (D65) → CIELAB with the D65 white of the same matrix.
/// Values above 1 are converted as-is.
pub fn linear_srgb_to_lab(rgb: [f64; 3]) -> Lab {
    let m = srgb_to_xyz_matrix();
    let white = mat_vec(&m, [1.0, 1.0, 1.0]);
    let xyz = mat_vec(&m, rgb);
    let fx = lab_f(xyz[0] / white[0]);
    let fy = lab_f(xyz[1] / white[1]);
    let fz = lab_f(xyz[2] / white[2]);
    Lab {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}
