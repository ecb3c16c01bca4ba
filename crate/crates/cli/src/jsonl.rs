//! Line-delimited JSON records for tracking logs and synth ground truth.

use std::path::Path;

use hubtrack_core::synth::FrameTruth;
use hubtrack_core::track::TrackState;
use serde::{Deserialize, Serialize};

/// One tracking log line. `cx`/`cy` are the converged centroid and
/// `w`/`h` the updated window extent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackLogRecord {
    pub frame: usize,
    pub cx: f64,
    pub cy: f64,
    pub w: usize,
    pub h: usize,
    pub m00: f64,
    pub iterations: u32,
    pub converged: bool,
}

impl From<&TrackState> for TrackLogRecord {
    fn from(s: &TrackState) -> Self {
        Self {
            frame: s.frame_index,
            cx: s.centroid.0,
            cy: s.centroid.1,
            w: s.window.w,
            h: s.window.h,
            m00: s.m00,
            iterations: s.iterations,
            converged: s.converged,
        }
    }
}

pub fn write_track_log(path: &Path, states: &[TrackState]) -> std::io::Result<()> {
    let mut out = Vec::new();
    for state in states {
        serde_json::to_writer(&mut out, &TrackLogRecord::from(state))?;
        out.push(b'\n');
    }
    std::fs::write(path, out)
}

pub fn write_truth(path: &Path, truth: &[FrameTruth]) -> std::io::Result<()> {
    let mut out = Vec::new();
    for t in truth {
        serde_json::to_writer(&mut out, t)?;
        out.push(b'\n');
    }
    std::fs::write(path, out)
}

pub fn read_track_log(path: &Path) -> std::io::Result<Vec<TrackLogRecord>> {
    let text = std::fs::read_to_string(path)?;
    let mut records = Vec::new();
    for line in text.lines() {
        let rec: TrackLogRecord = serde_json::from_str(line)?;
        records.push(rec);
    }
    Ok(records)
}
