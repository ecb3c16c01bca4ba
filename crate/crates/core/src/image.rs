//! Pixel buffers, regions of interest and colour-space conversions.
//!
//! Three concrete buffer types cover the pixel models used by the
//! pipeline: [`GrayImage`] (one `u8` sample per pixel), [`RgbImage`]
//! (interleaved `u8` RGB) and [`HsvImage`] (interleaved `f32` HSV with
//! hue in degrees `[0, 360)` and saturation/value in `[0, 1]`). The
//! [`Image`] enum wraps them where the model is only known at runtime,
//! e.g. after decoding a file.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Pixel model tag for dynamically typed images.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelModel {
    Gray8,
    Rgb8,
    Hsv,
}

/// Rectangular region of interest, `x`/`y` top-left, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Roi {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Roi {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Checks the region is non-empty and fully contained in `bw`x`bh`.
    pub fn check_within(&self, bw: usize, bh: usize) -> Result<()> {
        if self.w < 1
            || self.h < 1
            || self.x + self.w > bw
            || self.y + self.h > bh
        {
            return Err(Error::OutOfBounds {
                x: self.x,
                y: self.y,
                w: self.w,
                h: self.h,
                bw,
                bh,
            });
        }
        Ok(())
    }
}

/// Single-channel 8-bit image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height, "data length mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    /// Expands to RGB by replicating the gray sample into all channels.
    pub fn to_rgb(&self) -> RgbImage {
        let mut data = Vec::with_capacity(self.data.len() * 3);
        for &g in &self.data {
            data.extend_from_slice(&[g, g, g]);
        }
        RgbImage::from_vec(self.width, self.height, data)
    }
}

/// Interleaved 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self {
            width,
            height,
            data: vec![0; width * height * 3],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height * 3, "data length mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, px: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&px);
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.data
    }

    /// Luma conversion, `round(0.299 R + 0.587 G + 0.114 B)` per pixel.
    pub fn to_gray(&self) -> GrayImage {
        let mut out = Vec::with_capacity(self.width * self.height);
        for px in self.data.chunks_exact(3) {
            let y = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            out.push(math::round(y).clamp(0.0, 255.0) as u8);
        }
        GrayImage::from_vec(self.width, self.height, out)
    }

    /// Full-frame hexcone HSV conversion.
    pub fn to_hsv(&self) -> HsvImage {
        let mut out = Vec::with_capacity(self.width * self.height * 3);
        for px in self.data.chunks_exact(3) {
            let (h, s, v) = rgb_to_hsv(px[0], px[1], px[2]);
            out.extend_from_slice(&[h, s, v]);
        }
        HsvImage::from_vec(self.width, self.height, out)
    }

    /// HSV conversion restricted to `roi`; the result has the ROI's size.
    pub fn to_hsv_roi(&self, roi: Roi) -> Result<HsvImage> {
        roi.check_within(self.width, self.height)?;
        let mut out = Vec::with_capacity(roi.w * roi.h * 3);
        for y in roi.y..roi.y + roi.h {
            for x in roi.x..roi.x + roi.w {
                let px = self.get(x, y);
                let (h, s, v) = rgb_to_hsv(px[0], px[1], px[2]);
                out.extend_from_slice(&[h, s, v]);
            }
        }
        Ok(HsvImage::from_vec(roi.w, roi.h, out))
    }
}

/// Interleaved float HSV image; H in degrees `[0, 360)`, S and V in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HsvImage {
    width: usize,
    height: usize,
    data: Vec<f32>,
}

impl HsvImage {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self {
            width,
            height,
            data: vec![0.0; width * height * 3],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f32>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(data.len(), width * height * 3, "data length mismatch");
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [f32; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, px: [f32; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&px);
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }
}

/// An image whose pixel model is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum Image {
    Gray8(GrayImage),
    Rgb8(RgbImage),
    Hsv(HsvImage),
}

impl Image {
    pub fn model(&self) -> PixelModel {
        match self {
            Image::Gray8(_) => PixelModel::Gray8,
            Image::Rgb8(_) => PixelModel::Rgb8,
            Image::Hsv(_) => PixelModel::Hsv,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Image::Gray8(i) => i.width(),
            Image::Rgb8(i) => i.width(),
            Image::Hsv(i) => i.width(),
        }
    }

    pub fn height(&self) -> usize {
        match self {
            Image::Gray8(i) => i.height(),
            Image::Rgb8(i) => i.height(),
            Image::Hsv(i) => i.height(),
        }
    }

    /// Grayscale view of the image; errors on HSV inputs.
    pub fn to_gray(&self) -> Result<GrayImage> {
        match self {
            Image::Gray8(i) => Ok(i.clone()),
            Image::Rgb8(i) => Ok(i.to_gray()),
            Image::Hsv(_) => Err(Error::InvalidModel {
                expected: PixelModel::Rgb8,
                found: PixelModel::Hsv,
            }),
        }
    }

    /// RGB view; gray images are channel-replicated, HSV errors.
    pub fn to_rgb(&self) -> Result<RgbImage> {
        match self {
            Image::Gray8(i) => Ok(i.to_rgb()),
            Image::Rgb8(i) => Ok(i.clone()),
            Image::Hsv(_) => Err(Error::InvalidModel {
                expected: PixelModel::Rgb8,
                found: PixelModel::Hsv,
            }),
        }
    }
}

/// Hexcone RGB→HSV for one pixel. H is 0 whenever S is 0.
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f32, f32, f32) {
    let rf = r as f32 / 255.0;
    let gf = g as f32 / 255.0;
    let bf = b as f32 / 255.0;
    let max = rf.max(gf).max(bf);
    let min = rf.min(gf).min(bf);
    let delta = max - min;

    let v = max;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let mut h = if delta <= 0.0 {
        0.0
    } else if max == rf {
        60.0 * ((gf - bf) / delta)
    } else if max == gf {
        60.0 * ((bf - rf) / delta + 2.0)
    } else {
        60.0 * ((rf - gf) / delta + 4.0)
    };
    if h < 0.0 {
        h += 360.0;
    }
    if h >= 360.0 {
        h = 0.0;
    }
    (h, s, v)
}

/// HSV→RGB for one pixel, unquantised channels in `[0, 1]`.
pub fn hsv_to_rgb_f64(h: f32, s: f32, v: f32) -> [f64; 3] {
    let h = h as f64;
    let s = s as f64;
    let v = v as f64;
    if s <= 0.0 {
        return [v, v, v];
    }
    let c = v * s;
    let hp = (h / 60.0) % 6.0;
    let x = c * (1.0 - math::abs(hp % 2.0 - 1.0));
    let m = v - c;
    let (r1, g1, b1) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [r1 + m, g1 + m, b1 + m]
}

/// HSV→RGB for one pixel, rounded to bytes.
pub fn hsv_to_rgb(h: f32, s: f32, v: f32) -> [u8; 3] {
    let [r, g, b] = hsv_to_rgb_f64(h, s, v);
    [
        math::round(r * 255.0).clamp(0.0, 255.0) as u8,
        math::round(g * 255.0).clamp(0.0, 255.0) as u8,
        math::round(b * 255.0).clamp(0.0, 255.0) as u8,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_conversion_endpoints() {
        let img = RgbImage::from_vec(3, 1, vec![255, 255, 255, 0, 0, 0, 255, 0, 0]);
        let gray = img.to_gray();
        assert_eq!(gray.get(0, 0), 255);
        assert_eq!(gray.get(1, 0), 0);
        // round(0.299 * 255) = 76
        assert_eq!(gray.get(2, 0), 76);
    }

    #[test]
    fn grayscale_monotone_in_each_channel() {
        let base = [40u8, 90, 160];
        for ch in 0..3 {
            let mut prev = 0;
            for v in 0..=255u16 {
                let mut px = base;
                px[ch] = v as u8;
                let img = RgbImage::from_vec(1, 1, px.to_vec());
                let g = img.to_gray().get(0, 0);
                assert!(g >= prev, "channel {ch} not monotone at {v}");
                prev = g;
            }
        }
    }

    #[test]
    fn hsv_primaries() {
        let (h, s, v) = rgb_to_hsv(255, 0, 0);
        assert_eq!((h, s, v), (0.0, 1.0, 1.0));
        let (h, s, v) = rgb_to_hsv(0, 255, 0);
        assert_eq!((h, s, v), (120.0, 1.0, 1.0));
        let (h, s, v) = rgb_to_hsv(128, 128, 128);
        assert_eq!(h, 0.0);
        assert_eq!(s, 0.0);
        assert!((v - 0.50196).abs() < 1e-4);
    }

    #[test]
    fn hsv_round_trip_within_one_level() {
        // Deterministic LCG over a 10k-pixel sample of the RGB cube.
        let mut state = 0x2545f49_u32;
        for _ in 0..10_000 {
            state = state.wrapping_mul(1664525).wrapping_add(1013904223);
            let r = (state >> 8) as u8;
            let g = (state >> 16) as u8;
            let b = (state >> 24) as u8;
            let (h, s, v) = rgb_to_hsv(r, g, b);
            assert!((0.0..360.0).contains(&h), "h={h} out of range");
            assert!((0.0..=1.0).contains(&s));
            assert!((0.0..=1.0).contains(&v));
            let [r2, g2, b2] = hsv_to_rgb(h, s, v);
            assert!((r as i16 - r2 as i16).abs() <= 1, "{r} -> {r2}");
            assert!((g as i16 - g2 as i16).abs() <= 1, "{g} -> {g2}");
            assert!((b as i16 - b2 as i16).abs() <= 1, "{b} -> {b2}");
        }
    }

    #[test]
    fn roi_bounds_checks() {
        assert!(Roi::new(0, 0, 4, 4).check_within(4, 4).is_ok());
        assert!(Roi::new(1, 0, 4, 4).check_within(4, 4).is_err());
        assert!(Roi::new(0, 0, 0, 4).check_within(4, 4).is_err());
    }

    #[test]
    fn roi_restricted_hsv_matches_full_conversion() {
        let mut img = RgbImage::new(6, 5);
        for y in 0..5 {
            for x in 0..6 {
                img.set(x, y, [(x * 40) as u8, (y * 50) as u8, 200]);
            }
        }
        let full = img.to_hsv();
        let roi = Roi::new(2, 1, 3, 2);
        let sub = img.to_hsv_roi(roi).unwrap();
        for y in 0..roi.h {
            for x in 0..roi.w {
                assert_eq!(sub.get(x, y), full.get(roi.x + x, roi.y + y));
            }
        }
    }

    #[test]
    fn dynamic_image_model_dispatch() {
        let rgb = Image::Rgb8(RgbImage::new(2, 2));
        assert_eq!(rgb.model(), PixelModel::Rgb8);
        assert!(rgb.to_gray().is_ok());
        let hsv = Image::Hsv(HsvImage::new(2, 2));
        assert!(matches!(
            hsv.to_gray(),
            Err(Error::InvalidModel { .. })
        ));
    }
}
