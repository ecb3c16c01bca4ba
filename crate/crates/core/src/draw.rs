//! Overlay rasterisation for annotated output frames.

use crate::hough::CircleHit;
use crate::image::RgbImage;
use crate::track::Window;

pub const CIRCLE_COLOR: [u8; 3] = [0, 255, 0];
pub const WINDOW_COLOR: [u8; 3] = [255, 0, 0];

#[inline]
fn put(img: &mut RgbImage, x: i64, y: i64, color: [u8; 3]) {
    if x >= 0 && y >= 0 && (x as usize) < img.width() && (y as usize) < img.height() {
        img.set(x as usize, y as usize, color);
    }
}

/// Midpoint circle outline, clipped to the image.
pub fn draw_circle(img: &mut RgbImage, cx: i64, cy: i64, radius: u32, color: [u8; 3]) {
    if radius == 0 {
        put(img, cx, cy, color);
        return;
    }
    let mut x = radius as i64;
    let mut y = 0i64;
    let mut d = 1 - radius as i64;
    while y <= x {
        for &(px, py) in &[
            (cx + x, cy + y),
            (cx - x, cy + y),
            (cx + x, cy - y),
            (cx - x, cy - y),
            (cx + y, cy + x),
            (cx - y, cy + x),
            (cx + y, cy - x),
            (cx - y, cy - x),
        ] {
            put(img, px, py, color);
        }
        y += 1;
        if d < 0 {
            d += 2 * y + 1;
        } else {
            x -= 1;
            d += 2 * (y - x) + 1;
        }
    }
}

/// One-pixel rectangle outline, clipped to the image.
pub fn draw_rect(img: &mut RgbImage, x: i64, y: i64, w: usize, h: usize, color: [u8; 3]) {
    if w == 0 || h == 0 {
        return;
    }
    let (x1, y1) = (x + w as i64 - 1, y + h as i64 - 1);
    for px in x..=x1 {
        put(img, px, y, color);
        put(img, px, y1, color);
    }
    for py in y..=y1 {
        put(img, x, py, color);
        put(img, x1, py, color);
    }
}

/// Copies the frame and rasterises circle outlines (green) and the
/// tracking window (red) over it; out-of-bounds portions are clipped.
pub fn annotate(frame: &RgbImage, circles: &[CircleHit], window: Option<&Window>) -> RgbImage {
    let mut out = frame.clone();
    for c in circles {
        draw_circle(&mut out, c.cx as i64, c.cy as i64, c.radius, CIRCLE_COLOR);
    }
    if let Some(w) = window {
        draw_rect(&mut out, w.x as i64, w.y as i64, w.w, w.h, WINDOW_COLOR);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;

    /// Independent midpoint-circle oracle: per octant column x, the row
    /// is round(sqrt(r^2 - x^2)), reflected eight ways, up to the
    /// diagonal where the minor coordinate overtakes the major one.
    fn circle_pixel_oracle(cx: i64, cy: i64, r: i64) -> BTreeSet<(i64, i64)> {
        let mut set = BTreeSet::new();
        let mut x = 0i64;
        while x <= r {
            let y = (((r * r - x * x) as f64).sqrt()).round() as i64;
            if x > y {
                break;
            }
            for &(px, py) in &[
                (cx + x, cy + y),
                (cx - x, cy + y),
                (cx + x, cy - y),
                (cx - x, cy - y),
                (cx + y, cy + x),
                (cx - y, cy + x),
                (cx + y, cy - x),
                (cx - y, cy - x),
            ] {
                set.insert((px, py));
            }
            x += 1;
        }
        set
    }

    fn recolored(base: &RgbImage, img: &RgbImage) -> BTreeSet<(i64, i64)> {
        let mut set = BTreeSet::new();
        for y in 0..img.height() {
            for x in 0..img.width() {
                if img.get(x, y) != base.get(x, y) {
                    set.insert((x as i64, y as i64));
                }
            }
        }
        set
    }

    #[test]
    fn annotate_without_shapes_is_identity() {
        let frame = RgbImage::from_vec(4, 3, (0..36).map(|i| i as u8).collect());
        assert_eq!(annotate(&frame, &[], None), frame);
    }

    #[test]
    fn circle_matches_midpoint_oracle() {
        for r in 1..=50u32 {
            let side = (2 * r + 8) as usize;
            let base = RgbImage::new(side, side);
            let mut img = base.clone();
            let c = (side / 2) as i64;
            draw_circle(&mut img, c, c, r, [0, 255, 0]);
            let got = recolored(&base, &img);
            let want = circle_pixel_oracle(c, c, r as i64);
            assert_eq!(got, want, "pixel set differs at r={r}");
        }
    }

    #[test]
    fn annotated_circle_recolors_exactly_the_outline() {
        let frame = RgbImage::from_vec(32, 32, vec![10; 32 * 32 * 3]);
        let hit = CircleHit {
            cx: 16,
            cy: 15,
            radius: 9,
            votes: 1,
            support: 1,
        };
        let out = annotate(&frame, &[hit], None);
        let got = recolored(&frame, &out);
        let want = circle_pixel_oracle(16, 15, 9);
        assert_eq!(got, want);
        for &(x, y) in &got {
            assert_eq!(out.get(x as usize, y as usize), CIRCLE_COLOR);
        }
    }

    #[test]
    fn rect_clips_to_image() {
        let base = RgbImage::new(10, 10);
        let mut img = base.clone();
        // Window hanging off the right/bottom edge.
        draw_rect(&mut img, 6, 7, 8, 8, [255, 0, 0]);
        let got = recolored(&base, &img);
        let mut want: Vec<(i64, i64)> = Vec::new();
        for x in 6..10 {
            want.push((x, 7));
        }
        for y in 7..10 {
            want.push((6, y));
        }
        let want: BTreeSet<(i64, i64)> = want.into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn clipped_circle_stays_in_bounds() {
        let base = RgbImage::new(12, 12);
        let mut img = base.clone();
        draw_circle(&mut img, 1, 1, 6, [0, 255, 0]);
        // No panic and only in-bounds pixels recoloured.
        let oracle = circle_pixel_oracle(1, 1, 6);
        let got = recolored(&base, &img);
        let want: BTreeSet<(i64, i64)> = oracle
            .into_iter()
            .filter(|&(x, y)| x >= 0 && y >= 0 && x < 12 && y < 12)
            .collect();
        assert_eq!(got, want);
    }
}
