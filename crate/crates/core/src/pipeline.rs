//! End-to-end configuration and the detect-then-seed stage.

use crate::error::{Error, Result};
use crate::filter::gaussian_blur;
use crate::hist::HistParams;
use crate::hough::{detect_circles_diag, CircleHit, HoughParams};
use crate::image::{RgbImage, Roi};
use crate::math;
use crate::track::TrackParams;

/// Configuration for the whole detect-and-track pipeline.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PipelineConfig {
    pub hough: HoughParams,
    pub hist: HistParams,
    pub track: TrackParams,
    /// Pre-detection Gaussian blur sigma; 0 disables the blur.
    pub blur_sigma: f64,
    /// Seed ROI side relative to the hub diameter.
    pub roi_scale: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            hough: HoughParams::default(),
            hist: HistParams::default(),
            track: TrackParams::default(),
            blur_sigma: 1.0,
            roi_scale: 1.4,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.hough.validate()?;
        self.hist.validate()?;
        self.track.validate()?;
        if !(self.blur_sigma >= 0.0) {
            return Err(Error::InvalidParam("blur sigma must be >= 0"));
        }
        if !(self.roi_scale >= 1.0) {
            return Err(Error::InvalidParam("roi_scale must be >= 1"));
        }
        Ok(())
    }
}

/// Detects the hub in `frame` and derives the tracking seed region.
///
/// The seed is a square of side `roi_scale * 2 * radius` centred on the
/// strongest hit, clamped inside the frame.
pub fn detect_and_seed(frame: &RgbImage, cfg: &PipelineConfig) -> Result<(CircleHit, Roi)> {
    cfg.validate()?;
    let gray = frame.to_gray();
    let gray = if cfg.blur_sigma > 0.0 {
        gaussian_blur(&gray, cfg.blur_sigma)?
    } else {
        gray
    };
    let det = detect_circles_diag(&gray, &cfg.hough)?;
    let hit = *det.hits.first().ok_or(Error::NoCircle {
        candidates: det.candidates,
    })?;

    let (fw, fh) = (frame.width(), frame.height());
    let side = (math::round(cfg.roi_scale * 2.0 * hit.radius as f64) as i64).max(2) as usize;
    let side = side.min(fw).min(fh);
    let x = (hit.cx as i64 - side as i64 / 2).clamp(0, (fw - side) as i64) as usize;
    let y = (hit.cy as i64 - side as i64 / 2).clamp(0, (fh - side) as i64) as usize;
    Ok((hit, Roi::new(x, y, side, side)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{render_sequence, stationary_spec};

    fn table2_style() -> PipelineConfig {
        PipelineConfig {
            hough: HoughParams {
                dp: 1.0,
                min_dist: 18.0,
                canny_high: 50.0,
                acc_threshold: 33,
                min_radius: 0,
                max_radius: 25,
            },
            blur_sigma: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn config_validation_catches_component_errors() {
        let mut cfg = PipelineConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.hough.acc_threshold = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = PipelineConfig::default();
        cfg.roi_scale = 0.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn seeds_square_roi_on_hub() {
        let spec = stationary_spec(256, 256, 1);
        let (frames, _) = render_sequence(&spec).unwrap();
        let (hit, roi) = detect_and_seed(&frames[0], &table2_style()).unwrap();
        assert!((hit.cx - 128).abs() <= 2, "hub cx {}", hit.cx);
        assert!((hit.cy - 128).abs() <= 2, "hub cy {}", hit.cy);
        assert!((hit.radius as i64 - 17).abs() <= 2, "hub r {}", hit.radius);
        // roi side = round(1.4 * 2 * radius)
        let expected = (1.4 * 2.0 * hit.radius as f64).round() as usize;
        assert_eq!(roi.w, expected);
        assert_eq!(roi.h, expected);
        let roi_cx = roi.x as f64 + roi.w as f64 / 2.0;
        let roi_cy = roi.y as f64 + roi.h as f64 / 2.0;
        assert!((roi_cx - 128.0).abs() <= 2.0);
        assert!((roi_cy - 128.0).abs() <= 2.0);
    }

    #[test]
    fn black_frame_is_a_detection_failure() {
        let frame = RgbImage::new(96, 96);
        match detect_and_seed(&frame, &table2_style()) {
            Err(Error::NoCircle { candidates }) => assert_eq!(candidates, 0),
            other => panic!("expected detection failure, got {other:?}"),
        }
    }

    #[test]
    fn roi_clamped_when_hub_sits_near_corner() {
        let mut spec = stationary_spec(200, 200, 1);
        spec.path = alloc::vec![(14.0, 12.0)];
        spec.wheel.outer_radius = 80.0;
        spec.wheel.hub_radius = 12.0;
        let (frames, _) = render_sequence(&spec).unwrap();
        let mut cfg = table2_style();
        cfg.hough.max_radius = 18;
        let (hit, roi) = detect_and_seed(&frames[0], &cfg).unwrap();
        assert!((hit.cx - 14).abs() <= 2 && (hit.cy - 12).abs() <= 2);
        roi.check_within(200, 200).unwrap();
        // The hub centre stays inside the clamped region.
        assert!(roi.x <= hit.cx as usize && hit.cx as usize != 0);
        assert!((roi.x..roi.x + roi.w).contains(&(hit.cx as usize)));
        assert!((roi.y..roi.y + roi.h).contains(&(hit.cy as usize)));
    }
}
