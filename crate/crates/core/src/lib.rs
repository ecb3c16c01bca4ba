//! Wheel-hub detection and tracking primitives.
//!
//! The pipeline stages are:
//!
//! 1. **Image** – 8-bit gray/RGB and float HSV buffers with colour-space
//!    conversions and Gaussian smoothing.
//! 2. **Edges** – Sobel gradients and a Canny detector whose low
//!    threshold is fixed at half of the high one.
//! 3. **Circles** – Hough-gradient voting, candidate selection and
//!    distance-histogram radius estimation.
//! 4. **Colour model** – masked hue histograms and back-projection to a
//!    per-pixel target likelihood.
//! 5. **Tracking** – image moments, mean shift and the CamShift window
//!    update, folded over frame sequences.
//! 6. **Synthesis** – deterministic synthetic wheel scenes with ground
//!    truth for evaluation.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature and enable `libm` for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("hubtrack-core requires either the `std` or the `libm` feature");

mod math;

pub mod draw;
pub mod edge;
pub mod error;
pub mod filter;
pub mod hist;
pub mod hough;
pub mod image;
pub mod pipeline;
pub mod synth;
pub mod track;

pub use error::{Error, Result};
pub use image::{GrayImage, HsvImage, Image, PixelModel, RgbImage, Roi};
