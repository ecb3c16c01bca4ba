//! Crate-wide error type.

use crate::image::PixelModel;

/// Errors produced by detection and tracking operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An operation received an image in the wrong pixel model.
    #[error("invalid pixel model: expected {expected:?}, found {found:?}")]
    InvalidModel {
        expected: PixelModel,
        found: PixelModel,
    },

    /// A parameter violated its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParam(&'static str),

    /// The input image is smaller than the operation's minimum size.
    #[error("image {width}x{height} is smaller than the required {min}x{min}")]
    TooSmall {
        width: usize,
        height: usize,
        min: usize,
    },

    /// Two inputs that must share dimensions do not.
    #[error("dimension mismatch: {aw}x{ah} vs {bw}x{bh}")]
    SizeMismatch {
        aw: usize,
        ah: usize,
        bw: usize,
        bh: usize,
    },

    /// A region lies (partly) outside its owning image or map.
    #[error("region {x},{y} {w}x{h} is out of bounds for {bw}x{bh}")]
    OutOfBounds {
        x: usize,
        y: usize,
        w: usize,
        h: usize,
        bw: usize,
        bh: usize,
    },

    /// A tracking window contained zero probability mass.
    #[error("no probability mass inside the search window")]
    NoMass,

    /// Circle detection produced no acceptable hit.
    #[error("no circle detected ({candidates} candidate centres considered)")]
    NoCircle { candidates: usize },

    /// A frame sequence was empty.
    #[error("frame sequence is empty")]
    EmptySequence,
}

pub type Result<T> = core::result::Result<T, Error>;
