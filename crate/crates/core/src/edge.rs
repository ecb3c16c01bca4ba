//! Sobel gradients and Canny edge detection.
//!
//! The Canny stage exposes a single high threshold; the low threshold is
//! always half of it, and non-maximum suppression thins ridges along the
//! gradient direction quantised to four sectors.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::math;

/// Per-pixel Sobel derivatives plus derived magnitude and direction.
#[derive(Debug, Clone)]
pub struct GradientField {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f32>,
    pub gy: Vec<f32>,
    /// Euclidean magnitude, `sqrt(gx^2 + gy^2)` pointwise.
    pub magnitude: Vec<f32>,
    /// `atan2(gy, gx)` in radians, normalised to `(-pi, pi]`.
    pub direction: Vec<f32>,
}

impl GradientField {
    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }
}

/// Binary edge map produced by [`canny`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub width: usize,
    pub height: usize,
    pub edges: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            edges: vec![false; width * height],
        }
    }

    #[inline]
    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        self.edges[y * self.width + x]
    }

    pub fn count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    /// 0/255 rendering for debug dumps.
    pub fn to_gray(&self) -> GrayImage {
        let data = self.edges.iter().map(|&e| if e { 255 } else { 0 }).collect();
        GrayImage::from_vec(self.width, self.height, data)
    }
}

/// 3x3 Sobel derivatives with replicated borders, y pointing down.
pub fn sobel(img: &GrayImage) -> Result<GradientField> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::TooSmall {
            width: w,
            height: h,
            min: 3,
        });
    }

    let mut gx = vec![0.0f32; w * h];
    let mut gy = vec![0.0f32; w * h];
    let mut magnitude = vec![0.0f32; w * h];
    let mut direction = vec![0.0f32; w * h];

    let sample = |x: isize, y: isize| -> i32 {
        let cx = x.clamp(0, w as isize - 1) as usize;
        let cy = y.clamp(0, h as isize - 1) as usize;
        img.get(cx, cy) as i32
    };

    for y in 0..h {
        for x in 0..w {
            let (xi, yi) = (x as isize, y as isize);
            let p = [
                sample(xi - 1, yi - 1),
                sample(xi, yi - 1),
                sample(xi + 1, yi - 1),
                sample(xi - 1, yi),
                sample(xi + 1, yi),
                sample(xi - 1, yi + 1),
                sample(xi, yi + 1),
                sample(xi + 1, yi + 1),
            ];
            let dx = -p[0] + p[2] - 2 * p[3] + 2 * p[4] - p[5] + p[7];
            let dy = -p[0] - 2 * p[1] - p[2] + p[5] + 2 * p[6] + p[7];
            let i = y * w + x;
            gx[i] = dx as f32;
            gy[i] = dy as f32;
            magnitude[i] = math::sqrtf((dx * dx + dy * dy) as f32);
            let mut dir = math::atan2f(dy as f32, dx as f32);
            if dir <= -core::f32::consts::PI {
                dir = core::f32::consts::PI;
            }
            direction[i] = dir;
        }
    }

    Ok(GradientField {
        width: w,
        height: h,
        gx,
        gy,
        magnitude,
        direction,
    })
}

/// Gradient direction quantised to one of four suppression sectors.
///
/// Returns the two neighbour offsets along the gradient line, ordered so
/// the first is the lexicographically smaller pixel; ties on ridge
/// plateaus keep the lexicographically first pixel.
fn sector_neighbors(gx: f32, gy: f32) -> ((isize, isize), (isize, isize)) {
    let angle = {
        let mut a = math::atan2f(gy, gx).to_degrees();
        if a < 0.0 {
            a += 180.0;
        }
        a
    };
    if !(22.5..157.5).contains(&angle) {
        ((-1, 0), (1, 0)) // 0 deg: horizontal gradient
    } else if angle < 67.5 {
        ((-1, -1), (1, 1)) // 45 deg
    } else if angle < 112.5 {
        ((0, -1), (0, 1)) // 90 deg: vertical gradient
    } else {
        ((1, -1), (-1, 1)) // 135 deg
    }
}

/// Non-maximum suppression; keeps a pixel when it is strictly greater
/// than its earlier neighbour and at least its later neighbour along the
/// quantised gradient direction.
fn non_maximum_suppression(grad: &GradientField) -> Vec<f32> {
    let (w, h) = (grad.width, grad.height);
    let mag_at = |x: isize, y: isize| -> f32 {
        if x < 0 || y < 0 || x >= w as isize || y >= h as isize {
            0.0
        } else {
            grad.magnitude[y as usize * w + x as usize]
        }
    };

    let mut thin = vec![0.0f32; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let m = grad.magnitude[i];
            if m == 0.0 {
                continue;
            }
            let (prev, next) = sector_neighbors(grad.gx[i], grad.gy[i]);
            let mp = mag_at(x as isize + prev.0, y as isize + prev.1);
            let mn = mag_at(x as isize + next.0, y as isize + next.1);
            if m > mp && m >= mn {
                thin[i] = m;
            }
        }
    }
    thin
}

/// Hysteresis: strong pixels seed a flood through 8-connected weak ones.
fn hysteresis(thin: &[f32], w: usize, h: usize, high: f32, low: f32) -> EdgeMap {
    let mut map = EdgeMap::new(w, h);
    let mut stack = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if thin[i] >= high && !map.edges[i] {
                map.edges[i] = true;
                stack.push((x, y));
                while let Some((cx, cy)) = stack.pop() {
                    for dy in -1isize..=1 {
                        for dx in -1isize..=1 {
                            if dx == 0 && dy == 0 {
                                continue;
                            }
                            let nx = cx as isize + dx;
                            let ny = cy as isize + dy;
                            if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                                continue;
                            }
                            let ni = ny as usize * w + nx as usize;
                            if !map.edges[ni] && thin[ni] >= low {
                                map.edges[ni] = true;
                                stack.push((nx as usize, ny as usize));
                            }
                        }
                    }
                }
            }
        }
    }
    map
}

/// Canny edge detection with the low threshold fixed at `high / 2`.
pub fn canny(img: &GrayImage, high_threshold: f32) -> Result<EdgeMap> {
    let grad = sobel(img)?;
    canny_from_gradient(&grad, high_threshold)
}

/// Canny stages run on a precomputed gradient field.
pub fn canny_from_gradient(grad: &GradientField, high_threshold: f32) -> Result<EdgeMap> {
    if !(high_threshold > 0.0) {
        return Err(Error::InvalidParam("canny high threshold must be > 0"));
    }
    let low = high_threshold / 2.0;
    let thin = non_maximum_suppression(grad);
    Ok(hysteresis(&thin, grad.width, grad.height, high_threshold, low))
}
