//! Even-odd scanline polygon fill sampled at pixel centers.

use crate::error::{Error, Result};

use super::buffer::{PixelMask, Polygon};

/// ORs one polygon into `mask`. A pixel is inside when its center is inside
/// under the even-odd rule; edges are half-open in y.
pub fn fill_polygon(poly: &Polygon, mask: &mut PixelMask) {
    let (w, h) = mask.dims();
    let v = poly.vertices();
    let (ymin, ymax) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[1]), hi.max(p[1])));
    let row_lo = ((ymin - 0.5).floor().max(0.0)) as usize;
    let row_hi = ((ymax - 0.5).ceil().max(-1.0) + 1.0).min(h as f64) as usize;
    let mut xs: Vec<f64> = Vec::with_capacity(v.len());
    for y in row_lo..row_hi {
        let yc = y as f64 + 0.5;
        xs.clear();
        for i in 0..v.len() {
            let [xi, yi] = v[i];
            let [xj, yj] = v[(i + v.len() - 1) % v.len()];
            if (yi > yc) != (yj > yc) {
                xs.push((xj - xi) * (yc - yi) / (yj - yi) + xi);
            }
        }
        xs.sort_by(|a, b| a.total_cmp(b));
        for span in xs.chunks_exact(2) {
            let (xa, xb) = (span[0], span[1]);
            let lo = (xa - 0.5).floor().max(0.0) as usize;
            let hi = ((xb - 0.5).ceil() + 1.0).clamp(0.0, w as f64) as usize;
            for x in lo..hi {
                let xc = x as f64 + 0.5;
                if xc >= xa && xc < xb {
                    mask.set(x, y, true);
                }
            }
        }
    }
}

/// Union of the polygons' even-odd interiors.
pub fn rasterize_polygons(polys: &[Polygon], width: usize, height: usize) -> Result<PixelMask> {
    if width == 0 || height == 0 {
        return Err(Error::Parameter(format!(
            "raster target must be at least 1x1, got {width}x{height}"
        )));
    }
    let mut out = PixelMask::empty(width, height);
    for p in polys {
        if p.vertices().len() < 3 {
            return Err(Error::Annotation("degenerate polygon with fewer than 3 vertices".into()));
        }
        fill_polygon(p, &mut out);
    }
    Ok(out)
}
