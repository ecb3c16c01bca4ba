//! Hough-gradient circle detection.
//!
//! Edge pixels vote along their gradient line into a 2-D centre
//! accumulator; local maxima above the vote threshold become candidate
//! centres, each of which is assigned the radius best supported by the
//! edge-pixel distance histogram. Accepted circles keep a minimum
//! mutual distance.

use alloc::vec;
use alloc::vec::Vec;

use crate::edge::{canny_from_gradient, sobel, EdgeMap, GradientField};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::math;

/// Detection parameters.
///
/// `dp` is the inverse ratio of accumulator resolution to image
/// resolution; values below 1 are clamped to 1 so the accumulator never
/// exceeds the image. `canny_high` is the Canny high threshold (the low
/// threshold is always half of it) and `acc_threshold` the minimum vote
/// count for a candidate centre, which also serves as the minimum
/// radius support. `max_radius == 0` means unbounded (image diagonal)
/// and `min_radius == 0` is treated as 1.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct HoughParams {
    pub dp: f64,
    pub min_dist: f64,
    pub canny_high: f32,
    pub acc_threshold: u32,
    pub min_radius: u32,
    pub max_radius: u32,
}

impl Default for HoughParams {
    fn default() -> Self {
        Self {
            dp: 1.0,
            min_dist: 18.0,
            canny_high: 50.0,
            acc_threshold: 33,
            min_radius: 0,
            max_radius: 0,
        }
    }
}

impl HoughParams {
    pub fn validate(&self) -> Result<()> {
        if !self.dp.is_finite() {
            return Err(Error::InvalidParam("dp must be finite"));
        }
        if !(self.min_dist >= 1.0) {
            return Err(Error::InvalidParam("min_dist must be >= 1"));
        }
        if !(self.canny_high > 0.0) {
            return Err(Error::InvalidParam("canny_high must be > 0"));
        }
        if self.acc_threshold < 1 {
            return Err(Error::InvalidParam("acc_threshold must be >= 1"));
        }
        if self.max_radius > 0 && self.min_radius > self.max_radius {
            return Err(Error::InvalidParam("min_radius exceeds max_radius"));
        }
        Ok(())
    }

    /// Effective accumulator scale: `max(dp, 1)`.
    pub fn effective_dp(&self) -> f64 {
        self.dp.max(1.0)
    }

    /// Effective minimum radius: `max(min_radius, 1)`.
    pub fn effective_min_radius(&self) -> u32 {
        self.min_radius.max(1)
    }

    /// Effective maximum radius; 0 maps to the image diagonal.
    pub fn effective_max_radius(&self, width: usize, height: usize) -> u32 {
        if self.max_radius > 0 {
            self.max_radius
        } else {
            let d = math::sqrt((width * width + height * height) as f64);
            math::ceil(d) as u32
        }
    }
}

/// A detected circle: centre and radius in image pixels, the centre's
/// accumulator votes, and the number of edge pixels supporting the
/// chosen radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleHit {
    pub cx: i32,
    pub cy: i32,
    pub radius: u32,
    pub votes: u32,
    pub support: u32,
}

/// A candidate centre before radius estimation, in image pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub cx: i32,
    pub cy: i32,
    pub votes: u32,
}

/// 2-D vote grid over candidate circle centres.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterAccumulator {
    awidth: usize,
    aheight: usize,
    dp: f64,
    counts: Vec<u32>,
}

impl CenterAccumulator {
    fn new(width: usize, height: usize, dp: f64) -> Self {
        let awidth = math::ceil(width as f64 / dp) as usize;
        let aheight = math::ceil(height as f64 / dp) as usize;
        Self {
            awidth,
            aheight,
            dp,
            counts: vec![0; awidth * aheight],
        }
    }

    #[inline]
    pub fn awidth(&self) -> usize {
        self.awidth
    }

    #[inline]
    pub fn aheight(&self) -> usize {
        self.aheight
    }

    #[inline]
    pub fn count(&self, cx: usize, cy: usize) -> u32 {
        self.counts[cy * self.awidth + cx]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Representative image pixel of a cell (its centre).
    pub fn cell_to_image(&self, cx: usize, cy: usize) -> (i32, i32) {
        let ix = math::floor((cx as f64 + 0.5) * self.dp) as i32;
        let iy = math::floor((cy as f64 + 0.5) * self.dp) as i32;
        (ix, iy)
    }

    /// Builds an accumulator for tests; counts start at zero.
    pub fn zeroed(awidth: usize, aheight: usize, dp: f64) -> Self {
        Self {
            awidth,
            aheight,
            dp,
            counts: vec![0; awidth * aheight],
        }
    }

    /// Direct cell write for tests.
    pub fn set_count(&mut self, cx: usize, cy: usize, v: u32) {
        self.counts[cy * self.awidth + cx] = v;
    }
}

/// Votes along the gradient line of every edge pixel.
///
/// For each edge pixel with non-zero magnitude, both directions of the
/// unit gradient are walked in 1-pixel steps over the effective radius
/// range; each visited in-bounds cell receives one vote per walk, with
/// consecutive duplicate cells voted once. Returns the accumulator and
/// the list of edge-pixel coordinates for the radius phase.
pub fn accumulate_centers(
    edges: &EdgeMap,
    grad: &GradientField,
    params: &HoughParams,
) -> Result<(CenterAccumulator, Vec<(usize, usize)>)> {
    if edges.width != grad.width || edges.height != grad.height {
        return Err(Error::SizeMismatch {
            aw: edges.width,
            ah: edges.height,
            bw: grad.width,
            bh: grad.height,
        });
    }
    let (w, h) = (edges.width, edges.height);
    let dp = params.effective_dp();
    let mut acc = CenterAccumulator::new(w, h, dp);
    let r_min = params.effective_min_radius();
    let r_max = params.effective_max_radius(w, h);

    let mut nonzero = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !edges.is_edge(x, y) {
                continue;
            }
            nonzero.push((x, y));
            let i = grad.idx(x, y);
            let mag = grad.magnitude[i];
            if mag <= 0.0 {
                continue;
            }
            let ux = grad.gx[i] as f64 / mag as f64;
            let uy = grad.gy[i] as f64 / mag as f64;
            for sign in [1.0f64, -1.0] {
                let mut last: Option<(usize, usize)> = None;
                for d in r_min..=r_max {
                    let px = math::round(x as f64 + sign * d as f64 * ux) as i64;
                    let py = math::round(y as f64 + sign * d as f64 * uy) as i64;
                    if px < 0 || py < 0 {
                        break;
                    }
                    let cx = math::floor(px as f64 / dp) as i64;
                    let cy = math::floor(py as f64 / dp) as i64;
                    if cx >= acc.awidth as i64 || cy >= acc.aheight as i64 {
                        break;
                    }
                    let cell = (cx as usize, cy as usize);
                    if last != Some(cell) {
                        acc.counts[cell.1 * acc.awidth + cell.0] += 1;
                        last = Some(cell);
                    }
                }
            }
        }
    }
    Ok((acc, nonzero))
}

/// Selects centre candidates: cells at or above the vote threshold that
/// strictly dominate their 8-neighbourhood. A constant plateau counts as
/// one candidate (its lexicographically first cell) when every cell
/// outside the plateau is strictly smaller. Output is sorted by votes
/// descending, ties by (cy, cx) ascending, in image coordinates.
pub fn select_candidates(acc: &CenterAccumulator, params: &HoughParams) -> Vec<Candidate> {
    let (aw, ah) = (acc.awidth, acc.aheight);
    let mut visited = vec![false; aw * ah];
    let mut peaks: Vec<(u32, usize, usize)> = Vec::new();

    for start in 0..aw * ah {
        let c = acc.counts[start];
        if visited[start] || c < params.acc_threshold {
            continue;
        }
        // Flood the equal-count plateau containing this cell.
        let mut stack = vec![start];
        visited[start] = true;
        let mut lex_min = start;
        let mut is_peak = true;
        while let Some(idx) = stack.pop() {
            if idx < lex_min {
                lex_min = idx;
            }
            let (x, y) = (idx % aw, idx / aw);
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nx = x as isize + dx;
                    let ny = y as isize + dy;
                    if nx < 0 || ny < 0 || nx >= aw as isize || ny >= ah as isize {
                        continue;
                    }
                    let ni = ny as usize * aw + nx as usize;
                    let nc = acc.counts[ni];
                    if nc == c {
                        if !visited[ni] {
                            visited[ni] = true;
                            stack.push(ni);
                        }
                    } else if nc > c {
                        is_peak = false;
                    }
                }
            }
        }
        if is_peak {
            peaks.push((c, lex_min / aw, lex_min % aw));
        }
    }

    // Votes descending, then (cy, cx) ascending.
    peaks.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    peaks
        .into_iter()
        .map(|(votes, cy, cx)| {
            let (ix, iy) = acc.cell_to_image(cx, cy);
            Candidate {
                cx: ix,
                cy: iy,
                votes,
            }
        })
        .collect()
}

/// Picks the radius best supported by the edge pixels around `center`.
///
/// Distances are binned at 1-pixel width (bin k holds distances rounding
/// to k) over the effective radius range; the fullest bin wins, ties
/// prefer the smaller radius. Returns `None` when the best bin's count
/// is below the accumulator threshold.
pub fn estimate_radius(
    center: (i32, i32),
    nonzero: &[(usize, usize)],
    params: &HoughParams,
    dims: (usize, usize),
) -> Option<(u32, u32)> {
    let r_min = params.effective_min_radius();
    let r_max = params.effective_max_radius(dims.0, dims.1);
    if r_max < r_min {
        return None;
    }
    let mut bins = vec![0u32; (r_max - r_min + 1) as usize];
    for &(px, py) in nonzero {
        let d = math::dist(px as f64, py as f64, center.0 as f64, center.1 as f64);
        let b = math::round(d) as i64;
        if b >= r_min as i64 && b <= r_max as i64 {
            bins[(b - r_min as i64) as usize] += 1;
        }
    }
    let mut best = 0usize;
    for (i, &c) in bins.iter().enumerate() {
        if c > bins[best] {
            best = i;
        }
    }
    let support = bins[best];
    if support < params.acc_threshold {
        return None;
    }
    Some((r_min + best as u32, support))
}

/// Detection outcome with diagnostics.
#[derive(Debug, Clone)]
pub struct Detection {
    pub hits: Vec<CircleHit>,
    /// Candidate centres that passed the vote threshold.
    pub candidates: usize,
}

/// Full Hough-gradient pipeline with per-stage diagnostics.
pub fn detect_circles_diag(img: &GrayImage, params: &HoughParams) -> Result<Detection> {
    params.validate()?;
    let grad = sobel(img)?;
    let edges = canny_from_gradient(&grad, params.canny_high)?;
    let (acc, nonzero) = accumulate_centers(&edges, &grad, params)?;
    let candidates = select_candidates(&acc, params);
    let dims = (img.width(), img.height());

    let mut hits: Vec<CircleHit> = Vec::new();
    for cand in &candidates {
        let close = hits.iter().any(|h| {
            math::dist(h.cx as f64, h.cy as f64, cand.cx as f64, cand.cy as f64)
                < params.min_dist
        });
        if close {
            continue;
        }
        if let Some((radius, support)) =
            estimate_radius((cand.cx, cand.cy), &nonzero, params, dims)
        {
            hits.push(CircleHit {
                cx: cand.cx,
                cy: cand.cy,
                radius,
                votes: cand.votes,
                support,
            });
        }
    }
    Ok(Detection {
        hits,
        candidates: candidates.len(),
    })
}

/// Detects circles in a grayscale image; hits are ordered by votes
/// descending and keep a pairwise centre distance of at least
/// `min_dist`.
pub fn detect_circles(img: &GrayImage, params: &HoughParams) -> Result<Vec<CircleHit>> {
    Ok(detect_circles_diag(img, params)?.hits)
}
