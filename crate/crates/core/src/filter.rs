//! Separable Gaussian smoothing.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::math;

/// Builds the normalised 1-D kernel with radius `ceil(3 sigma)`.
fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = math::ceil(3.0 * sigma) as usize;
    let mut k: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let d = i as f64 - radius as f64;
            math::exp(-(d * d) / (2.0 * sigma * sigma))
        })
        .collect();
    let sum: f64 = k.iter().sum();
    for w in &mut k {
        *w /= sum;
    }
    k
}

/// Blurs `img` with a separable Gaussian of the given sigma.
///
/// Borders replicate the edge pixel. The intermediate pass stays in
/// floating point so each output sample is rounded exactly once.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidParam("blur sigma must be > 0"));
    }
    let kernel = gaussian_kernel(sigma);
    let radius = kernel.len() / 2;
    let (w, h) = (img.width(), img.height());

    // Horizontal pass.
    let mut tmp = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &kw) in kernel.iter().enumerate() {
                let sx = (x + i).saturating_sub(radius).min(w - 1);
                acc += kw * img.get(sx, y) as f64;
            }
            tmp[y * w + x] = acc;
        }
    }

    // Vertical pass, rounded to bytes.
    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &kw) in kernel.iter().enumerate() {
                let sy = (y + i).saturating_sub(radius).min(h - 1);
                acc += kw * tmp[sy * w + x];
            }
            out.set(x, y, math::round(acc).clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_sigma() {
        let img = GrayImage::new(4, 4);
        assert!(matches!(
            gaussian_blur(&img, 0.0),
            Err(Error::InvalidParam(_))
        ));
        assert!(gaussian_blur(&img, -1.0).is_err());
    }

    #[test]
    fn constant_image_is_fixed_point() {
        let img = GrayImage::from_vec(8, 6, vec![173; 48]);
        for sigma in [0.5, 1.0, 2.5] {
            assert_eq!(gaussian_blur(&img, sigma).unwrap(), img);
        }
    }

    #[test]
    fn impulse_center_matches_kernel_value() {
        // Expected value computed from the normalised kernel itself:
        // centre = round(255 * k0^2) = 41 for sigma = 1.
        let mut img = GrayImage::new(15, 15);
        img.set(7, 7, 255);
        let out = gaussian_blur(&img, 1.0).unwrap();
        assert_eq!(out.get(7, 7), 41);

        let kernel = gaussian_kernel(1.0);
        let k0 = kernel[kernel.len() / 2];
        assert_eq!(out.get(7, 7), math::round(255.0 * k0 * k0) as u8);
    }

    #[test]
    fn total_sum_preserved_within_rounding() {
        let mut img = GrayImage::new(16, 12);
        let mut state = 7u32;
        for y in 0..12 {
            for x in 0..16 {
                state = state.wrapping_mul(1664525).wrapping_add(1013904223);
                img.set(x, y, (state >> 24) as u8);
            }
        }
        let out = gaussian_blur(&img, 1.3).unwrap();
        let sin: i64 = img.as_slice().iter().map(|&v| v as i64).sum();
        let sout: i64 = out.as_slice().iter().map(|&v| v as i64).sum();
        let n = (16 * 12) as f64;
        assert!(
            ((sin - sout).abs() as f64) <= 0.5 * n,
            "sum drifted: {sin} -> {sout}"
        );
    }

    #[test]
    fn commutes_with_translation_away_from_borders() {
        let mut img = GrayImage::new(24, 20);
        let mut state = 99u32;
        for y in 0..20 {
            for x in 0..24 {
                state = state.wrapping_mul(1664525).wrapping_add(1013904223);
                img.set(x, y, (state >> 24) as u8);
            }
        }
        let (dx, dy) = (3usize, 2usize);
        let mut shifted = GrayImage::new(24, 20);
        for y in dy..20 {
            for x in dx..24 {
                shifted.set(x, y, img.get(x - dx, y - dy));
            }
        }
        let sigma = 1.0;
        let radius = gaussian_kernel(sigma).len() / 2;
        let a = gaussian_blur(&shifted, sigma).unwrap();
        let b = gaussian_blur(&img, sigma).unwrap();
        // Compare interiors clear of both the border band and the shift.
        let margin = radius + dx.max(dy);
        for y in margin..20 - margin {
            for x in margin..24 - margin {
                assert_eq!(a.get(x, y), b.get(x - dx, y - dy), "at {x},{y}");
            }
        }
    }
}
