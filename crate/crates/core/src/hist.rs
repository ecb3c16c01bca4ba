//! Colour models for tracking: masked hue histograms, back-projection
//! and per-channel intensity histograms for reporting.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::image::{HsvImage, RgbImage, Roi};

/// Histogram geometry and mask thresholds shared by the pipeline.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct HistParams {
    pub bins: usize,
    pub smin: f32,
    pub vmin: f32,
}

impl Default for HistParams {
    fn default() -> Self {
        Self {
            bins: 16,
            smin: 0.125,
            vmin: 0.125,
        }
    }
}

impl HistParams {
    pub fn validate(&self) -> Result<()> {
        if self.bins < 1 {
            return Err(Error::InvalidParam("histogram bins must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.smin) || !(0.0..=1.0).contains(&self.vmin) {
            return Err(Error::InvalidParam("smin/vmin must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Max-normalised hue histogram of a masked region.
///
/// Weights are in `[0, 1]` with the fullest bin at exactly 1 whenever
/// any pixel passed the saturation/value mask; all weights are 0
/// otherwise. The mask thresholds travel with the histogram so that
/// back-projection applies the same mask.
#[derive(Debug, Clone, PartialEq)]
pub struct HueHistogram {
    pub weights: Vec<f32>,
    pub smin: f32,
    pub vmin: f32,
}

impl HueHistogram {
    pub fn bins(&self) -> usize {
        self.weights.len()
    }
}

/// Maps a hue in degrees to its bin; total over `[0, 360)`.
#[inline]
fn hue_bin(h: f32, bins: usize) -> usize {
    let b = (h as f64 / 360.0 * bins as f64) as usize;
    b.min(bins - 1)
}

#[inline]
fn mask_passes(s: f32, v: f32, smin: f32, vmin: f32) -> bool {
    s >= smin && v >= vmin
}

/// Computes the masked hue histogram of `roi`, max-normalised to 1.
pub fn compute_hue_histogram(
    img: &HsvImage,
    roi: Roi,
    bins: usize,
    smin: f32,
    vmin: f32,
) -> Result<HueHistogram> {
    if bins < 1 {
        return Err(Error::InvalidParam("histogram bins must be >= 1"));
    }
    roi.check_within(img.width(), img.height())?;

    let mut counts = vec![0u64; bins];
    for y in roi.y..roi.y + roi.h {
        for x in roi.x..roi.x + roi.w {
            let [h, s, v] = img.get(x, y);
            if mask_passes(s, v, smin, vmin) {
                counts[hue_bin(h, bins)] += 1;
            }
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    let weights = if max == 0 {
        vec![0.0; bins]
    } else {
        counts.iter().map(|&c| c as f32 / max as f32).collect()
    };
    Ok(HueHistogram {
        weights,
        smin,
        vmin,
    })
}

/// Per-pixel target likelihood in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    pub width: usize,
    pub height: usize,
    pub p: Vec<f32>,
}

impl ProbabilityMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            p: vec![0.0; width * height],
        }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f32 {
        self.p[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: f32) {
        self.p[y * self.width + x] = v;
    }
}

/// Replaces every pixel with its histogram weight: `P(x, y) = h(I(x, y))`
/// for pixels passing the mask, 0 otherwise. Pointwise, no smoothing.
pub fn back_project(img: &HsvImage, hist: &HueHistogram) -> ProbabilityMap {
    let bins = hist.bins();
    let mut map = ProbabilityMap::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let [h, s, v] = img.get(x, y);
            if mask_passes(s, v, hist.smin, hist.vmin) {
                map.set(x, y, hist.weights[hue_bin(h, bins)]);
            }
        }
    }
    map
}

/// Colour channel tag, reported in the blue/green/red order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    B,
    G,
    R,
}

impl Channel {
    pub fn label(&self) -> &'static str {
        match self {
            Channel::B => "B",
            Channel::G => "G",
            Channel::R => "R",
        }
    }
}

/// Exact 256-bin intensity histogram of one channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelHistogram {
    pub channel: Channel,
    pub counts: Vec<u32>,
}

/// 256-bin histograms of the three channels, in B, G, R order.
pub fn compute_channel_histograms(img: &RgbImage) -> [ChannelHistogram; 3] {
    let mut b = vec![0u32; 256];
    let mut g = vec![0u32; 256];
    let mut r = vec![0u32; 256];
    for px in img.as_slice().chunks_exact(3) {
        r[px[0] as usize] += 1;
        g[px[1] as usize] += 1;
        b[px[2] as usize] += 1;
    }
    [
        ChannelHistogram {
            channel: Channel::B,
            counts: b,
        },
        ChannelHistogram {
            channel: Channel::G,
            counts: g,
        },
        ChannelHistogram {
            channel: Channel::R,
            counts: r,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hsv_filled(w: usize, h: usize, px: [f32; 3]) -> HsvImage {
        let mut img = HsvImage::new(w, h);
        for y in 0..h {
            for x in 0..w {
                img.set(x, y, px);
            }
        }
        img
    }

    #[test]
    fn uniform_hue_fills_single_bin() {
        let img = hsv_filled(8, 8, [0.0, 1.0, 1.0]);
        let hist =
            compute_hue_histogram(&img, Roi::new(0, 0, 8, 8), 16, 0.125, 0.125).unwrap();
        assert_eq!(hist.weights[0], 1.0);
        assert!(hist.weights[1..].iter().all(|&w| w == 0.0));
    }

    #[test]
    fn fully_masked_region_yields_zero_histogram() {
        let img = hsv_filled(6, 6, [50.0, 0.0, 1.0]);
        let hist =
            compute_hue_histogram(&img, Roi::new(0, 0, 6, 6), 16, 0.125, 0.125).unwrap();
        assert!(hist.weights.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn equal_halves_both_normalise_to_one() {
        let mut img = HsvImage::new(8, 4);
        for y in 0..4 {
            for x in 0..8 {
                let h = if x < 4 { 0.0 } else { 120.0 };
                img.set(x, y, [h, 1.0, 1.0]);
            }
        }
        let hist =
            compute_hue_histogram(&img, Roi::new(0, 0, 8, 4), 16, 0.125, 0.125).unwrap();
        // floor(120 / 360 * 16) = 5
        assert_eq!(hist.weights[0], 1.0);
        assert_eq!(hist.weights[5], 1.0);
        let others: f32 = hist
            .weights
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 0 && *i != 5)
            .map(|(_, &w)| w)
            .sum();
        assert_eq!(others, 0.0);
    }

    #[test]
    fn roi_out_of_bounds_rejected() {
        let img = hsv_filled(4, 4, [0.0, 1.0, 1.0]);
        assert!(matches!(
            compute_hue_histogram(&img, Roi::new(2, 2, 4, 4), 16, 0.1, 0.1),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn hue_binning_is_total() {
        for bins in [1usize, 7, 16, 180] {
            let mut step = 0.0f32;
            while step < 360.0 {
                let b = hue_bin(step, bins);
                assert!(b < bins, "hue {step} escaped with {bins} bins");
                step += 0.21;
            }
            assert_eq!(hue_bin(359.9999, bins), bins - 1);
        }
    }

    #[test]
    fn back_projection_pointwise_values() {
        let mut img = HsvImage::new(8, 4);
        for y in 0..4 {
            for x in 0..8 {
                let h = if x < 4 { 0.0 } else { 120.0 };
                img.set(x, y, [h, 1.0, 1.0]);
            }
        }
        let mut hist = HueHistogram {
            weights: vec![0.0; 16],
            smin: 0.125,
            vmin: 0.125,
        };
        hist.weights[0] = 1.0;
        hist.weights[5] = 0.5;
        let map = back_project(&img, &hist);
        for y in 0..4 {
            for x in 0..8 {
                let expected = if x < 4 { 1.0 } else { 0.5 };
                assert_eq!(map.at(x, y), expected);
            }
        }
    }

    #[test]
    fn back_projection_of_unmodelled_hue_is_zero() {
        let img = hsv_filled(5, 5, [180.0, 1.0, 1.0]);
        let mut hist = HueHistogram {
            weights: vec![0.0; 16],
            smin: 0.125,
            vmin: 0.125,
        };
        hist.weights[0] = 1.0;
        let map = back_project(&img, &hist);
        assert!(map.p.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn back_projection_matches_per_pixel_oracle() {
        // Independent recomputation pixel by pixel.
        let mut img = HsvImage::new(16, 16);
        let mut state = 5u32;
        for y in 0..16 {
            for x in 0..16 {
                state = state.wrapping_mul(1664525).wrapping_add(1013904223);
                let h = (state % 360_000) as f32 / 1000.0;
                let s = ((state >> 8) % 1000) as f32 / 999.0;
                let v = ((state >> 16) % 1000) as f32 / 999.0;
                img.set(x, y, [h, s, v]);
            }
        }
        let hist =
            compute_hue_histogram(&img, Roi::new(2, 2, 10, 10), 16, 0.125, 0.125).unwrap();
        let map = back_project(&img, &hist);
        for y in 0..16 {
            for x in 0..16 {
                let [h, s, v] = img.get(x, y);
                let expected = if s >= 0.125 && v >= 0.125 {
                    hist.weights[((h as f64 / 360.0 * 16.0) as usize).min(15)]
                } else {
                    0.0
                };
                assert_eq!(map.at(x, y), expected, "at {x},{y}");
            }
        }
    }

    #[test]
    fn value_scaling_leaves_back_projection_unchanged() {
        // All pixels keep S >= smin and V*k >= vmin for k in [0.6, 1.4].
        let mut img = HsvImage::new(12, 12);
        let mut state = 11u32;
        for y in 0..12 {
            for x in 0..12 {
                state = state.wrapping_mul(1664525).wrapping_add(1013904223);
                let h = (state % 360_000) as f32 / 1000.0;
                let s = 0.3 + ((state >> 8) % 500) as f32 / 1000.0;
                let v = 0.3 + ((state >> 16) % 500) as f32 / 1000.0;
                img.set(x, y, [h, s, v]);
            }
        }
        let hist =
            compute_hue_histogram(&img, Roi::new(0, 0, 12, 12), 16, 0.125, 0.125).unwrap();
        let base = back_project(&img, &hist);
        for k in [0.6f32, 0.8, 1.0, 1.2, 1.4] {
            let mut scaled = img.clone();
            for y in 0..12 {
                for x in 0..12 {
                    let [h, s, v] = img.get(x, y);
                    scaled.set(x, y, [h, s, (v * k).min(1.0)]);
                }
            }
            let out = back_project(&scaled, &hist);
            assert_eq!(out, base, "changed under V scale {k}");
        }
    }

    #[test]
    fn channel_histograms_basic_counts() {
        let img = RgbImage::from_vec(1, 1, vec![255, 0, 0]);
        let [b, g, r] = compute_channel_histograms(&img);
        assert_eq!(b.channel, Channel::B);
        assert_eq!(b.counts[0], 1);
        assert_eq!(g.counts[0], 1);
        assert_eq!(r.counts[255], 1);

        let img = RgbImage::from_vec(2, 2, vec![10, 20, 30].repeat(4));
        let [b, g, r] = compute_channel_histograms(&img);
        assert_eq!(r.counts[10], 4);
        assert_eq!(g.counts[20], 4);
        assert_eq!(b.counts[30], 4);
    }

    #[test]
    fn channel_histograms_conserve_pixel_count() {
        let mut data = Vec::new();
        let mut state = 23u32;
        for _ in 0..64 * 64 * 3 {
            state = state.wrapping_mul(1664525).wrapping_add(1013904223);
            data.push((state >> 24) as u8);
        }
        let img = RgbImage::from_vec(64, 64, data);
        for h in compute_channel_histograms(&img) {
            let total: u64 = h.counts.iter().map(|&c| c as u64).sum();
            assert_eq!(total, 64 * 64);
        }
    }
}
