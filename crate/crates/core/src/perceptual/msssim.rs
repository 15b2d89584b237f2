use crate::error::{Error, Result};
use crate::imagecore::{blur_plane, gaussian_kernel, LinearImage};

use super::{check_same_size, PerceptualDistance};

/// Standard five-scale weights; the first `scales` are renormalized.
const WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
const K1: f64 = 0.01;
const K2: f64 = 0.03;

/// `1 − MS-SSIM`, averaged over channels, for inputs with unit dynamic range.
#[derive(Debug, Clone, PartialEq)]
pub struct MsSsim {
    pub scales: usize,
    /// Window standard deviation; the window spans `2·ceil(3σ)+1` taps.
    pub window_sigma: f64,
}

impl Default for MsSsim {
    fn default() -> Self {
        Self {
            scales: 3,
            window_sigma: 1.5,
        }
    }
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Mean contrast-structure term and mean full SSIM at one scale.
fn ssim_terms(x: &[f64], y: &[f64], w: usize, h: usize, k: &[f64]) -> (f64, f64) {
    let (c1, c2) = (K1 * K1, K2 * K2);
    let mx = blur_plane(x, w, h, k);
    let my = blur_plane(y, w, h, k);
    let sxx = blur_plane(&mul(x, x), w, h, k);
    let syy = blur_plane(&mul(y, y), w, h, k);
    let sxy = blur_plane(&mul(x, y), w, h, k);
    let (mut cs_sum, mut ssim_sum) = (0.0, 0.0);
    for i in 0..w * h {
        let (a, b) = (mx[i], my[i]);
        let vx = sxx[i] - a * a;
        let vy = syy[i] - b * b;
        let cov = sxy[i] - a * b;
        let l = (2.0 * a * b + c1) / (a * a + b * b + c1);
        let cs = (2.0 * cov + c2) / (vx + vy + c2);
        cs_sum += cs;
        ssim_sum += l * cs;
    }
    let n = (w * h) as f64;
    (cs_sum / n, ssim_sum / n)
}

fn pool2(data: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let (nw, nh) = (w / 2, h / 2);
    let mut out = Vec::with_capacity(nw * nh);
    for y in 0..nh {
        for x in 0..nw {
            let i = 2 * y * w + 2 * x;
            out.push((data[i] + data[i + 1] + data[i + w] + data[i + w + 1]) / 4.0);
        }
    }
    (out, nw, nh)
}

impl MsSsim {
    fn weights(&self) -> Vec<f64> {
        let w = &WEIGHTS[..self.scales];
        let s: f64 = w.iter().sum();
        w.iter().map(|v| v / s).collect()
    }

    /// MS-SSIM of one channel plane.
    pub fn plane_similarity(&self, x: &[f64], y: &[f64], w: usize, h: usize) -> Result<f64> {
        let k = gaussian_kernel(self.window_sigma)?;
        let weights = self.weights();
        let (mut x, mut y) = (x.to_vec(), y.to_vec());
        let (mut w, mut h) = (w, h);
        let mut score = 1.0;
        for (s, wt) in weights.iter().enumerate() {
            let (cs, ssim) = ssim_terms(&x, &y, w, h, &k);
            let last = s + 1 == weights.len();
            let term = if last { ssim.max(0.0) } else { cs.max(0.0) };
            score *= term.powf(*wt);
            if !last {
                (x, _, _) = pool2(&x, w, h);
                (y, w, h) = pool2(&y, w, h);
            }
        }
        Ok(score)
    }
}

impl PerceptualDistance for MsSsim {
    fn id(&self) -> String {
        format!("builtin:ms-ssim(scales={},sigma={})", self.scales, self.window_sigma)
    }

    fn distance(&self, a: &LinearImage, b: &LinearImage) -> Result<f64> {
        check_same_size(a, b)?;
        if !(1..=WEIGHTS.len()).contains(&self.scales) {
            return Err(Error::Parameter(format!("ms-ssim scales must be 1..=5, got {}", self.scales)));
        }
        let (w, h) = a.dims();
        let min_side = 1usize << (self.scales - 1);
        if w < min_side || h < min_side {
            return Err(Error::Parameter(format!(
                "crop {w}x{h} too small for {} scales",
                self.scales
            )));
        }
        let mut total = 0.0;
        for c in 0..3 {
            total += self.plane_similarity(a.channel(c).data(), b.channel(c).data(), w, h)?;
        }
        Ok((1.0 - total / 3.0).max(0.0))
    }
}
