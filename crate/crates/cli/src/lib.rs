//! Command-line surface for hub detection, tracking and scene synthesis.

pub mod commands;
pub mod config;
pub mod error;
pub mod jsonl;
pub mod pnm;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::HistMode;
use crate::config::HoughOverrides;
use crate::error::CliResult;
use hubtrack_core::image::Roi;

#[derive(Parser)]
#[command(
    name = "hubtrack",
    version,
    about = "Detects a wheel hub with a gradient Hough transform and tracks it with CamShift"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Detect circles in a PGM/PPM image; prints `cx cy radius votes` per hit.
    Detect {
        image: PathBuf,
        #[command(flatten)]
        overrides: HoughOverrides,
        /// Write a copy of the image with detected circles drawn in green.
        #[arg(long)]
        annotate: Option<PathBuf>,
    },
    /// Emit channel or hue histograms as CSV on stdout.
    Hist {
        image: PathBuf,
        /// Restrict to a region: x,y,w,h.
        #[arg(long, value_parser = commands::parse_roi)]
        roi: Option<Roi>,
        #[arg(long, value_enum, default_value = "bgr")]
        mode: HistMode,
        /// Hue histogram bin count (hue mode only).
        #[arg(long, default_value_t = 16)]
        bins: usize,
    },
    /// Render a synthetic wheel sequence plus truth.jsonl from a JSON spec.
    Synth { spec: PathBuf, out_dir: PathBuf },
    /// Track the hub across frame_%06d.ppm frames (detects the seed on frame 0).
    Track {
        frame_dir: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: HoughOverrides,
        /// Write annotated frames here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Write the JSONL tracking log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Detect and track, writing annotated frames and track.jsonl into out-dir.
    Run {
        frame_dir: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: HoughOverrides,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Detect {
            image,
            overrides,
            annotate,
        } => commands::detect(&image, &overrides, annotate.as_deref()),
        Command::Hist {
            image,
            roi,
            mode,
            bins,
        } => commands::hist(&image, roi, mode, bins),
        Command::Synth { spec, out_dir } => commands::synth(&spec, &out_dir),
        Command::Track {
            frame_dir,
            config,
            overrides,
            out_dir,
            log,
        } => commands::track(
            &frame_dir,
            &config,
            &overrides,
            out_dir.as_deref(),
            log.as_deref(),
        ),
        Command::Run {
            frame_dir,
            config,
            overrides,
            out_dir,
        } => commands::run(&frame_dir, &config, &overrides, &out_dir),
    }
}
