use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// H×W×3 linear RGB, row-major, channels interleaved. Values are finite and
/// non-negative; they may exceed 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl LinearImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height * 3 {
            return Err(Error::Parameter(format!(
                "expected {} values for a {width}x{height} RGB image, got {}",
                width * height * 3,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InputRange(format!(
                "linear image values must be finite and >= 0, found {v}"
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height * 3);
        debug_assert!(data.iter().all(|v| v.is_finite() && *v >= 0.0));
        Self {
            width,
            height,
            data,
        }
    }

    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Result<Self> {
        let data = (0..width * height).flat_map(|_| rgb).collect();
        Self::new(width, height, data)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [f64; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }

    /// Multiplies every value by `c` (c ≥ 0).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Parameter(format!("scale must be finite and >= 0, got {c}")));
        }
        Ok(Self::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|v| v * c).collect(),
        ))
    }

    /// Multiplies each channel by its own non-negative factor.
    pub fn scaled_channels(&self, c: [f64; 3]) -> Result<Self> {
        if c.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Parameter(format!(
                "channel scales must be finite and >= 0, got {c:?}"
            )));
        }
        let data = self
            .data
            .chunks_exact(3)
            .flat_map(|p| [p[0] * c[0], p[1] * c[1], p[2] * c[2]])
            .collect();
        Ok(Self::from_raw(self.width, self.height, data))
    }

    pub fn channel(&self, c: usize) -> GrayImage {
        assert!(c < 3, "channel index {c} out of range");
        GrayImage::from_raw(
            self.width,
            self.height,
            self.data.iter().skip(c).step_by(3).copied().collect(),
        )
    }

    /// Interleaves three planes; each must be non-negative.
    pub fn from_channels(channels: [&GrayImage; 3]) -> Result<Self> {
        let (w, h) = channels[0].dims();
        if channels.iter().any(|c| c.dims() != (w, h)) {
            return Err(Error::Parameter("channel planes differ in size".into()));
        }
        let data = (0..w * h)
            .flat_map(|i| [channels[0].data[i], channels[1].data[i], channels[2].data[i]])
            .collect();
        Self::new(w, h, data)
    }

    pub fn crop(&self, rect: Rect) -> Result<Self> {
        if rect.x0 + rect.w > self.width || rect.y0 + rect.h > self.height || rect.w == 0 || rect.h == 0
        {
            return Err(Error::Parameter(format!(
                "crop {rect:?} does not fit in {}x{}",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(rect.area() * 3);
        for y in rect.y0..rect.y0 + rect.h {
            let start = (y * self.width + rect.x0) * 3;
            data.extend_from_slice(&self.data[start..start + rect.w * 3]);
        }
        Ok(Self::from_raw(rect.w, rect.h, data))
    }

    pub fn channel_means(&self) -> [f64; 3] {
        let mut sum = [0.0; 3];
        for p in self.pixels() {
            for c in 0..3 {
                sum[c] += p[c];
            }
        }
        let n = (self.width * self.height) as f64;
        sum.map(|s| s / n)
    }
}

/// H×W scalar plane.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pub(crate) data: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Parameter(format!(
                "expected {} values for a {width}x{height} plane, got {}",
                width * height,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InputRange("gray image values must be finite".into()));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub(crate) fn from_raw(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_raw(self.width, self.height, self.data.iter().map(|v| v * c).collect())
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }
}

/// Boolean per-pixel mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl PixelMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Parameter(format!(
                "expected {} mask values for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![true; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|b| *b)
    }

    fn zip_with(&self, other: &PixelMask, f: impl Fn(bool, bool) -> bool) -> Result<PixelMask> {
        if self.dims() != other.dims() {
            return Err(Error::Parameter(format!(
                "mask sizes differ: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(PixelMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn and(&self, other: &PixelMask) -> Result<PixelMask> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn or(&self, other: &PixelMask) -> Result<PixelMask> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn and_not(&self, other: &PixelMask) -> Result<PixelMask> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn not(&self) -> PixelMask {
        PixelMask {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|b| !b).collect(),
        }
    }

    /// Indices (row-major) of set pixels.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.data.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn as_f64(&self) -> GrayImage {
        GrayImage::from_raw(
            self.width,
            self.height,
            self.data.iter().map(|b| if *b { 1.0 } else { 0.0 }).collect(),
        )
    }
}

/// Axis-aligned rectangle in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self { x0, y0, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }
}

/// Closed polygon in pixel coordinates; pixel (x, y) has its center at (x + 0.5, y + 0.5).
///
/// Deserialization does not validate; call [`Polygon::validate`] (manifest
/// loading does) or construct through [`Polygon::new`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let p = Self { vertices };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() < 3 {
            return Err(Error::Annotation(format!(
                "polygon needs at least 3 vertices, got {}",
                self.vertices.len()
            )));
        }
        if self.vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Annotation("polygon has non-finite coordinates".into()));
        }
        Ok(())
    }

    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self {
            vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
        }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn scaled(&self, sx: f64, sy: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|[x, y]| [x * sx, y * sy]).collect(),
        }
    }
}
