//! Maximum-area axis-aligned rectangle of set pixels.
//!
//! Each row is treated as the base of a histogram of consecutive set pixels
//! above it; a monotone stack yields, for every bar, the widest span where
//! it is the minimum. Every maximal rectangle is visited, so the global
//! maximum is found in O(W·H).

use super::buffer::{PixelMask, Rect};

fn better(candidate: Rect, best: Option<Rect>) -> bool {
    match best {
        None => true,
        Some(b) => {
            let (ca, ba) = (candidate.area(), b.area());
            ca > ba || (ca == ba && (candidate.y0, candidate.x0, candidate.h) < (b.y0, b.x0, b.h))
        }
    }
}

/// Ties on area go to the smallest `(y0, x0)`, then the smallest height.
/// Returns `None` for an all-false mask.
pub fn largest_inscribed_rect(mask: &PixelMask) -> Option<Rect> {
    let (w, h) = mask.dims();
    let mut heights = vec![0usize; w];
    let mut stack: Vec<usize> = Vec::with_capacity(w + 1);
    let mut best: Option<Rect> = None;

    for y in 0..h {
        for (x, hx) in heights.iter_mut().enumerate() {
            *hx = if mask.get(x, y) { *hx + 1 } else { 0 };
        }
        stack.clear();
        for x in 0..=w {
            let cur = if x < w { heights[x] } else { 0 };
            while let Some(&top) = stack.last() {
                if heights[top] <= cur {
                    break;
                }
                stack.pop();
                let bar = heights[top];
                let left = stack.last().map_or(0, |&l| l + 1);
                let rect = Rect::new(left, y + 1 - bar, x - left, bar);
                if better(rect, best) {
                    best = Some(rect);
                }
            }
            // Equal heights collapse onto the later index; the span of the
            // earlier one is covered when the later one pops.
            if let Some(&top) = stack.last() {
                if heights[top] == cur {
                    stack.pop();
                }
            }
            stack.push(x);
        }
    }
    best
}
