//! Image moments, mean-shift iteration and the CamShift window update.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hist::{back_project, compute_hue_histogram, HistParams, ProbabilityMap};
use crate::image::{RgbImage, Roi};
use crate::math;

/// Raw image moments up to second order, window-absolute coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m00: f64,
    pub m10: f64,
    pub m01: f64,
    pub m20: f64,
    pub m02: f64,
}

impl Moments {
    /// Centre of mass `(m10/m00, m01/m00)`; errors when there is no mass.
    pub fn centroid(&self) -> Result<(f64, f64)> {
        if self.m00 <= 0.0 {
            return Err(Error::NoMass);
        }
        Ok((self.m10 / self.m00, self.m01 / self.m00))
    }
}

/// Axis-aligned search window, clamped inside its probability map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Window {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Centre of the window's pixel grid.
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + (self.w as f64 - 1.0) / 2.0,
            self.y as f64 + (self.h as f64 - 1.0) / 2.0,
        )
    }

    pub fn check_within(&self, bw: usize, bh: usize) -> Result<()> {
        if self.w < 2 || self.h < 2 || self.x + self.w > bw || self.y + self.h > bh {
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

/// Window sizing rule applied after each mean-shift convergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum WindowMode {
    /// `ratio = (M20/xc^2)/(M02/yc^2)`, `w = 2 M00 ratio`, `h = 2 M00 / ratio`,
    /// applied literally. Position-dependent and dimensionally loose; kept
    /// for fidelity tests.
    PaperEq78,
    /// Central-moment aspect with `w h = area_scale^2 M00`. Pipeline default.
    CentralMoments,
}

/// Mean-shift / CamShift iteration parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct TrackParams {
    /// Convergence displacement in pixels.
    pub eps: f64,
    pub max_iter: u32,
    pub window_mode: WindowMode,
    pub area_scale: f64,
}

impl Default for TrackParams {
    fn default() -> Self {
        Self {
            eps: 1.0,
            max_iter: 10,
            window_mode: WindowMode::CentralMoments,
            area_scale: 2.0,
        }
    }
}

impl TrackParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidParam("eps must be > 0"));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidParam("max_iter must be >= 1"));
        }
        if !(self.area_scale > 0.0) {
            return Err(Error::InvalidParam("area_scale must be > 0"));
        }
        Ok(())
    }
}

/// Per-frame tracking result.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackState {
    pub frame_index: usize,
    pub window: Window,
    pub centroid: (f64, f64),
    pub m00: f64,
    pub iterations: u32,
    pub converged: bool,
}

/// Exact moment sums over the window, coordinates absolute.
pub fn compute_moments(p: &ProbabilityMap, win: &Window) -> Result<Moments> {
    win.check_within(p.width, p.height)?;
    let mut m = Moments {
        m00: 0.0,
        m10: 0.0,
        m01: 0.0,
        m20: 0.0,
        m02: 0.0,
    };
    for y in win.y..win.y + win.h {
        let yf = y as f64;
        for x in win.x..win.x + win.w {
            let v = p.at(x, y) as f64;
            if v == 0.0 {
                continue;
            }
            let xf = x as f64;
            m.m00 += v;
            m.m10 += xf * v;
            m.m01 += yf * v;
            m.m20 += xf * xf * v;
            m.m02 += yf * yf * v;
        }
    }
    Ok(m)
}

/// One recorded mean-shift iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShiftStep {
    /// Window position after this iteration's recentring.
    pub window: Window,
    /// Mass measured before the recentring.
    pub m00: f64,
    pub centroid: (f64, f64),
    /// Distance the window moved this iteration.
    pub displacement: f64,
}

/// Mean-shift outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShift {
    pub window: Window,
    pub iterations: u32,
    pub converged: bool,
}

fn recenter(cx: f64, cy: f64, w: usize, h: usize, bw: usize, bh: usize) -> (usize, usize) {
    let nx = math::round(cx - (w as f64 - 1.0) / 2.0) as i64;
    let ny = math::round(cy - (h as f64 - 1.0) / 2.0) as i64;
    (
        nx.clamp(0, (bw - w) as i64) as usize,
        ny.clamp(0, (bh - h) as i64) as usize,
    )
}

/// Runs mean shift recording every iteration.
///
/// The window keeps its size (flat kernel over the window) and is
/// recentred on the rounded centroid each iteration, clamped inside the
/// map; iteration stops when the displacement drops below `eps` or
/// after `max_iter` rounds.
pub fn mean_shift_steps(
    p: &ProbabilityMap,
    win: &Window,
    params: &TrackParams,
) -> Result<Vec<MeanShiftStep>> {
    params.validate()?;
    win.check_within(p.width, p.height)?;
    let mut cur = *win;
    let mut steps = Vec::new();
    for _ in 0..params.max_iter {
        let m = compute_moments(p, &cur)?;
        if m.m00 <= 0.0 {
            return Err(Error::NoMass);
        }
        let (cx, cy) = m.centroid()?;
        let (nx, ny) = recenter(cx, cy, cur.w, cur.h, p.width, p.height);
        let disp = math::dist(nx as f64, ny as f64, cur.x as f64, cur.y as f64);
        cur.x = nx;
        cur.y = ny;
        steps.push(MeanShiftStep {
            window: cur,
            m00: m.m00,
            centroid: (cx, cy),
            displacement: disp,
        });
        if disp < params.eps {
            break;
        }
    }
    Ok(steps)
}

/// Mean shift to convergence or `max_iter`.
pub fn mean_shift(p: &ProbabilityMap, win: &Window, params: &TrackParams) -> Result<MeanShift> {
    let steps = mean_shift_steps(p, win, params)?;
    let last = steps.last().expect("max_iter >= 1 guarantees a step");
    Ok(MeanShift {
        window: last.window,
        iterations: steps.len() as u32,
        converged: last.displacement < params.eps,
    })
}

/// New window extent from the converged moments.
pub fn update_window(
    m: &Moments,
    centroid: (f64, f64),
    mode: WindowMode,
    area_scale: f64,
    map_w: usize,
    map_h: usize,
) -> Result<(usize, usize)> {
    if m.m00 <= 0.0 {
        return Err(Error::InvalidParam("window update requires m00 > 0"));
    }
    let (xc, yc) = centroid;
    let (w, h) = match mode {
        WindowMode::PaperEq78 => {
            if !(xc > 0.0 && yc > 0.0) {
                return Err(Error::InvalidParam(
                    "literal window update requires a positive centroid",
                ));
            }
            let ratio = (m.m20 / (xc * xc)) / (m.m02 / (yc * yc));
            (2.0 * m.m00 * ratio, 2.0 * m.m00 / ratio)
        }
        WindowMode::CentralMoments => {
            if !(area_scale > 0.0) {
                return Err(Error::InvalidParam("area_scale must be > 0"));
            }
            let mu20 = (m.m20 / m.m00 - xc * xc).max(0.0);
            let mu02 = (m.m02 / m.m00 - yc * yc).max(0.0);
            let r = if mu20 > 0.0 && mu02 > 0.0 {
                math::sqrt(mu20 / mu02)
            } else {
                1.0
            };
            (
                area_scale * math::sqrt(m.m00 * r),
                area_scale * math::sqrt(m.m00 / r),
            )
        }
    };
    let w = (math::round(w) as i64).clamp(2, map_w as i64) as usize;
    let h = (math::round(h) as i64).clamp(2, map_h as i64) as usize;
    Ok((w, h))
}

/// One CamShift round: mean shift to convergence, then one window
/// resize, with the new window centred on the final centroid.
pub fn camshift_step(
    p: &ProbabilityMap,
    win: &Window,
    params: &TrackParams,
) -> Result<TrackState> {
    let ms = mean_shift(p, win, params)?;
    let m = compute_moments(p, &ms.window)?;
    if m.m00 <= 0.0 {
        return Err(Error::NoMass);
    }
    let centroid = m.centroid()?;
    let (nw, nh) = update_window(
        &m,
        centroid,
        params.window_mode,
        params.area_scale,
        p.width,
        p.height,
    )?;
    let (nx, ny) = recenter(centroid.0, centroid.1, nw, nh, p.width, p.height);
    Ok(TrackState {
        frame_index: 0,
        window: Window::new(nx, ny, nw, nh),
        centroid,
        m00: m.m00,
        iterations: ms.iterations,
        converged: ms.converged,
    })
}

/// Tracks a colour target across frames.
///
/// The hue model is learned once from `seed` on frame 0 and kept fixed;
/// every frame is back-projected and stepped with CamShift from the
/// previous window. A frame with zero mass emits an unconverged state
/// and coasts on the previous window.
pub fn track_sequence(
    frames: &[RgbImage],
    seed: Roi,
    hist_params: &HistParams,
    track_params: &TrackParams,
) -> Result<Vec<TrackState>> {
    let first = frames.first().ok_or(Error::EmptySequence)?;
    hist_params.validate()?;
    track_params.validate()?;
    seed.check_within(first.width(), first.height())?;
    if seed.w < 2 || seed.h < 2 {
        return Err(Error::InvalidParam("seed window must be at least 2x2"));
    }

    let seed_hsv = first.to_hsv_roi(seed)?;
    let hist = compute_hue_histogram(
        &seed_hsv,
        Roi::new(0, 0, seed.w, seed.h),
        hist_params.bins,
        hist_params.smin,
        hist_params.vmin,
    )?;

    let mut win = Window::new(seed.x, seed.y, seed.w, seed.h);
    let mut states = Vec::with_capacity(frames.len());
    for (i, frame) in frames.iter().enumerate() {
        if frame.width() != first.width() || frame.height() != first.height() {
            return Err(Error::SizeMismatch {
                aw: first.width(),
                ah: first.height(),
                bw: frame.width(),
                bh: frame.height(),
            });
        }
        let pm = back_project(&frame.to_hsv(), &hist);
        match camshift_step(&pm, &win, track_params) {
            Ok(mut state) => {
                state.frame_index = i;
                win = state.window;
                states.push(state);
            }
            Err(Error::NoMass) => {
                states.push(TrackState {
                    frame_index: i,
                    window: win,
                    centroid: win.center(),
                    m00: 0.0,
                    iterations: 0,
                    converged: false,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(states)
}
