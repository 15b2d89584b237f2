//! Rasterizes a polygon and finds the largest axis-aligned rectangle inside
//! it, printing the mask as text.

use albedo_bench::imagecore::{largest_inscribed_rect, rasterize_polygons, Polygon};

fn main() -> albedo_bench::Result<()> {
    let l_shape = Polygon::new(vec![[1.0, 1.0], [20.0, 1.0], [20.0, 6.0], [9.0, 6.0], [9.0, 13.0], [1.0, 13.0]])?;
    let star = Polygon::new(vec![[30.0, 1.0], [33.0, 10.0], [24.0, 4.5], [36.0, 4.5], [27.0, 10.0]])?;
    let mask = rasterize_polygons(&[l_shape, star], 40, 14)?;
    let rect = largest_inscribed_rect(&mask).expect("mask is not empty");
    for y in 0..mask.height() {
        let row: String = (0..mask.width())
            .map(|x| {
                let inside = x >= rect.x0 && x < rect.x0 + rect.w && y >= rect.y0 && y < rect.y0 + rect.h;
                match (mask.get(x, y), inside) {
                    (true, true) => '#',
                    (true, false) => '+',
                    _ => '.',
                }
            })
            .collect();
        println!("{row}");
    }
    println!("{} set pixels, best rectangle {rect:?} (area {})", mask.count(), rect.area());
    Ok(())
}
