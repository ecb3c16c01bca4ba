//! Subcommand implementations.

use std::io::Write;
use std::path::Path;

use hubtrack_core::draw::annotate;
use hubtrack_core::hist::{compute_channel_histograms, compute_hue_histogram, HistParams};
use hubtrack_core::hough::detect_circles;
use hubtrack_core::image::{Image, RgbImage, Roi};
use hubtrack_core::pipeline::{detect_and_seed, PipelineConfig};
use hubtrack_core::synth::{render_sequence, SynthSpec};
use hubtrack_core::track::{track_sequence, TrackState, Window};
use hubtrack_core::{Error as CoreError, PixelModel};

use crate::config::{load_config, HoughOverrides};
use crate::error::{CliError, CliResult};
use crate::jsonl::{write_track_log, write_truth};
use crate::pnm::{load_pnm, save_pnm};

pub fn frame_name(index: usize) -> String {
    format!("frame_{index:06}.ppm")
}

/// Loads `frame_000000.ppm`, `frame_000001.ppm`, ... as RGB frames.
fn load_frames(dir: &Path) -> CliResult<Vec<RgbImage>> {
    let mut frames = Vec::new();
    loop {
        let path = dir.join(frame_name(frames.len()));
        if !path.is_file() {
            break;
        }
        let img = load_pnm(&path)?;
        frames.push(img.to_rgb().map_err(CliError::from)?);
    }
    if frames.is_empty() {
        return Err(CliError::Io {
            context: format!("loading frames from {}", dir.display()),
            source: std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no frame_000000.ppm found",
            ),
        });
    }
    Ok(frames)
}

fn stdout_flush(buf: &[u8]) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(buf).map_err(CliError::io("writing stdout"))?;
    out.flush().map_err(CliError::io("writing stdout"))
}

pub fn detect(
    image: &Path,
    overrides: &HoughOverrides,
    annotate_out: Option<&Path>,
) -> CliResult<()> {
    let mut cfg = PipelineConfig::default();
    overrides.apply(&mut cfg);
    cfg.validate().map_err(CliError::from)?;

    let img = load_pnm(image)?;
    let gray = img.to_gray().map_err(CliError::from)?;
    let gray = if cfg.blur_sigma > 0.0 {
        hubtrack_core::filter::gaussian_blur(&gray, cfg.blur_sigma).map_err(CliError::from)?
    } else {
        gray
    };
    let hits = detect_circles(&gray, &cfg.hough).map_err(CliError::from)?;

    let mut out = String::new();
    for h in &hits {
        out.push_str(&format!("{} {} {} {}\n", h.cx, h.cy, h.radius, h.votes));
    }
    stdout_flush(out.as_bytes())?;

    if let Some(path) = annotate_out {
        let rgb = img.to_rgb().map_err(CliError::from)?;
        let annotated = annotate(&rgb, &hits, None);
        save_pnm(&Image::Rgb8(annotated), path)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HistMode {
    Bgr,
    Hue,
}

pub fn hist(image: &Path, roi: Option<Roi>, mode: HistMode, bins: usize) -> CliResult<()> {
    let img = load_pnm(image)?;
    let rgb = match img {
        Image::Rgb8(rgb) => rgb,
        other => {
            return Err(CliError::from(CoreError::InvalidModel {
                expected: PixelModel::Rgb8,
                found: other.model(),
            }))
        }
    };
    let roi = roi.unwrap_or(Roi::new(0, 0, rgb.width(), rgb.height()));
    roi.check_within(rgb.width(), rgb.height())
        .map_err(CliError::from)?;

    let mut out = String::new();
    match mode {
        HistMode::Bgr => {
            // Crop so the counts cover exactly the requested region.
            let mut crop = RgbImage::new(roi.w, roi.h);
            for y in 0..roi.h {
                for x in 0..roi.w {
                    crop.set(x, y, rgb.get(roi.x + x, roi.y + y));
                }
            }
            out.push_str("channel,bin,count\n");
            for h in compute_channel_histograms(&crop) {
                for (bin, count) in h.counts.iter().enumerate() {
                    out.push_str(&format!("{},{bin},{count}\n", h.channel.label()));
                }
            }
        }
        HistMode::Hue => {
            let defaults = HistParams::default();
            let hsv = rgb.to_hsv_roi(roi).map_err(CliError::from)?;
            let hist = compute_hue_histogram(
                &hsv,
                Roi::new(0, 0, roi.w, roi.h),
                bins,
                defaults.smin,
                defaults.vmin,
            )
            .map_err(CliError::from)?;
            out.push_str("bin,weight\n");
            for (bin, w) in hist.weights.iter().enumerate() {
                out.push_str(&format!("{bin},{w}\n"));
            }
        }
    }
    stdout_flush(out.as_bytes())
}

pub fn synth(spec_path: &Path, out_dir: &Path) -> CliResult<()> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(CliError::io(format!("reading spec {}", spec_path.display())))?;
    let spec: SynthSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", spec_path.display())))?;
    let (frames, truth) = render_sequence(&spec).map_err(CliError::from)?;

    std::fs::create_dir_all(out_dir)
        .map_err(CliError::io(format!("creating {}", out_dir.display())))?;
    for (i, frame) in frames.into_iter().enumerate() {
        save_pnm(&Image::Rgb8(frame), &out_dir.join(frame_name(i)))?;
    }
    write_truth(&out_dir.join("truth.jsonl"), &truth)
        .map_err(CliError::io("writing truth.jsonl"))?;
    Ok(())
}

fn write_annotated(
    dir: &Path,
    frames: &[RgbImage],
    states: &[TrackState],
    seed_hit: Option<&hubtrack_core::hough::CircleHit>,
) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(format!("creating {}", dir.display())))?;
    for (i, frame) in frames.iter().enumerate() {
        let window: Window = states[i].window;
        let circles = match (i, seed_hit) {
            (0, Some(hit)) => vec![*hit],
            _ => Vec::new(),
        };
        let annotated = annotate(frame, &circles, Some(&window));
        save_pnm(&Image::Rgb8(annotated), &dir.join(frame_name(i)))?;
    }
    Ok(())
}

/// Shared detect-and-track run over a frame directory.
fn run_tracking(
    frame_dir: &Path,
    cfg: &PipelineConfig,
) -> CliResult<(
    Vec<RgbImage>,
    hubtrack_core::hough::CircleHit,
    Vec<TrackState>,
)> {
    let frames = load_frames(frame_dir)?;
    let (hit, seed) = detect_and_seed(&frames[0], cfg).map_err(CliError::from)?;
    let states =
        track_sequence(&frames, seed, &cfg.hist, &cfg.track).map_err(CliError::from)?;
    Ok((frames, hit, states))
}

pub fn track(
    frame_dir: &Path,
    config: &Path,
    overrides: &HoughOverrides,
    out_dir: Option<&Path>,
    log: Option<&Path>,
) -> CliResult<()> {
    let mut cfg = load_config(config)?;
    overrides.apply(&mut cfg);
    cfg.validate().map_err(CliError::from)?;

    let (frames, hit, states) = run_tracking(frame_dir, &cfg)?;
    if let Some(path) = log {
        write_track_log(path, &states).map_err(CliError::io("writing track log"))?;
    }
    if let Some(dir) = out_dir {
        write_annotated(dir, &frames, &states, Some(&hit))?;
    }
    Ok(())
}

pub fn run(
    frame_dir: &Path,
    config: &Path,
    overrides: &HoughOverrides,
    out_dir: &Path,
) -> CliResult<()> {
    let mut cfg = load_config(config)?;
    overrides.apply(&mut cfg);
    cfg.validate().map_err(CliError::from)?;

    let (frames, hit, states) = run_tracking(frame_dir, &cfg)?;
    stdout_flush(format!("{} {} {} {}\n", hit.cx, hit.cy, hit.radius, hit.votes).as_bytes())?;
    std::fs::create_dir_all(out_dir)
        .map_err(CliError::io(format!("creating {}", out_dir.display())))?;
    write_track_log(&out_dir.join("track.jsonl"), &states)
        .map_err(CliError::io("writing track log"))?;
    write_annotated(&out_dir.join("annotated"), &frames, &states, Some(&hit))?;
    Ok(())
}

/// Parses `x,y,w,h` into a region of interest.
pub fn parse_roi(s: &str) -> Result<Roi, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected x,y,w,h".into());
    }
    let parse = |p: &str| -> Result<usize, String> {
        p.trim().parse().map_err(|_| format!("bad number {p:?}"))
    };
    Ok(Roi::new(
        parse(parts[0])?,
        parse(parts[1])?,
        parse(parts[2])?,
        parse(parts[3])?,
    ))
}
