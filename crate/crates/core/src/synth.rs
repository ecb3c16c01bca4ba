//! Synthetic wheel scenes with per-frame ground truth.
//!
//! Each frame renders an anti-aliased dark annulus (the tyre) carrying a
//! fully saturated hub disk on a light gray background, with per-frame
//! centre position, radius scale and illumination multipliers plus
//! optional seeded Gaussian pixel noise. The sidecar truth records the
//! rendered geometry, giving the detection and tracking suites an exact
//! reference.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::image::{hsv_to_rgb_f64, RgbImage};
use crate::math;

/// Background gray level (as a value in [0, 1], zero saturation).
pub const BACKGROUND_VALUE: f64 = 0.82;

/// Wheel geometry and colours.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct WheelSpec {
    /// Tyre outer radius in pixels at scale 1.
    pub outer_radius: f64,
    /// Hub radius in pixels at scale 1.
    pub hub_radius: f64,
    /// Hub hue in degrees; the hub is rendered fully saturated at V = 1.
    pub hub_hue: f32,
    /// Tyre gray value in [0, 1].
    pub tyre_value: f64,
}

/// Full scene description; all per-frame vectors must have `frames`
/// entries and rendering is deterministic under `rng_seed`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SynthSpec {
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub wheel: WheelSpec,
    /// Per-frame wheel centre (x, y).
    pub path: Vec<(f64, f64)>,
    /// Per-frame radius multiplier.
    pub scale: Vec<f64>,
    /// Per-frame V multiplier, applied to every pixel and clamped.
    pub illumination: Vec<f64>,
    /// Gaussian pixel noise sigma on the 0..255 byte scale.
    pub noise_sigma: f64,
    pub rng_seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width < 1 || self.height < 1 {
            return Err(Error::InvalidParam("frame dimensions must be >= 1"));
        }
        if self.frames < 1 {
            return Err(Error::InvalidParam("frame count must be >= 1"));
        }
        if !(self.wheel.hub_radius > 0.0) || !(self.wheel.outer_radius > 0.0) {
            return Err(Error::InvalidParam("wheel radii must be > 0"));
        }
        if self.wheel.hub_radius >= self.wheel.outer_radius {
            return Err(Error::InvalidParam("hub radius must be < outer radius"));
        }
        if !(0.0..=1.0).contains(&self.wheel.tyre_value) {
            return Err(Error::InvalidParam("tyre value must lie in [0, 1]"));
        }
        if self.path.len() != self.frames
            || self.scale.len() != self.frames
            || self.illumination.len() != self.frames
        {
            return Err(Error::InvalidParam(
                "path, scale and illumination must have one entry per frame",
            ));
        }
        if self.scale.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvalidParam("scale entries must be > 0"));
        }
        if self.illumination.iter().any(|&k| !(k > 0.0)) {
            return Err(Error::InvalidParam("illumination entries must be > 0"));
        }
        if !(self.noise_sigma >= 0.0) {
            return Err(Error::InvalidParam("noise sigma must be >= 0"));
        }
        Ok(())
    }
}

/// Ground truth for one rendered frame.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameTruth {
    pub frame: usize,
    pub cx: f64,
    pub cy: f64,
    pub hub_radius: f64,
    pub outer_radius: f64,
    pub scale: f64,
    pub illumination: f64,
}

#[inline]
fn coverage(radius: f64, dist: f64) -> f64 {
    (radius + 0.5 - dist).clamp(0.0, 1.0)
}

#[inline]
fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ]
}

/// Renders the whole sequence plus its ground-truth sidecar.
pub fn render_sequence(spec: &SynthSpec) -> Result<(Vec<RgbImage>, Vec<FrameTruth>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let noise = if spec.noise_sigma > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma).expect("validated sigma"))
    } else {
        None
    };

    let bg = [BACKGROUND_VALUE; 3];
    let tyre = [spec.wheel.tyre_value; 3];
    let hub = hsv_to_rgb_f64(spec.wheel.hub_hue, 1.0, 1.0);

    let mut frames = Vec::with_capacity(spec.frames);
    let mut truth = Vec::with_capacity(spec.frames);
    for i in 0..spec.frames {
        let (cx, cy) = spec.path[i];
        let s = spec.scale[i];
        let illum = spec.illumination[i];
        let hub_r = spec.wheel.hub_radius * s;
        let outer_r = spec.wheel.outer_radius * s;

        let mut img = RgbImage::new(spec.width, spec.height);
        for y in 0..spec.height {
            for x in 0..spec.width {
                let d = math::dist(x as f64, y as f64, cx, cy);
                let mut c = mix(bg, tyre, coverage(outer_r, d));
                c = mix(c, hub, coverage(hub_r, d));
                let mut px = [0u8; 3];
                for ch in 0..3 {
                    let lit = (c[ch] * illum).clamp(0.0, 1.0);
                    let mut v = lit * 255.0;
                    if let Some(n) = &noise {
                        v += n.sample(&mut rng);
                    }
                    px[ch] = math::round(v).clamp(0.0, 255.0) as u8;
                }
                img.set(x, y, px);
            }
        }
        frames.push(img);
        truth.push(FrameTruth {
            frame: i,
            cx,
            cy,
            hub_radius: hub_r,
            outer_radius: outer_r,
            scale: s,
            illumination: illum,
        });
    }
    Ok((frames, truth))
}

/// Convenience spec: stationary wheel centred in the frame.
pub fn stationary_spec(width: usize, height: usize, frames: usize) -> SynthSpec {
    let c = (width as f64 / 2.0, height as f64 / 2.0);
    SynthSpec {
        width,
        height,
        frames,
        wheel: WheelSpec {
            outer_radius: 107.0,
            hub_radius: 17.0,
            hub_hue: 120.0,
            tyre_value: 0.15,
        },
        path: alloc::vec![c; frames],
        scale: alloc::vec![1.0; frames],
        illumination: alloc::vec![1.0; frames],
        noise_sigma: 0.0,
        rng_seed: 1,
    }
}
