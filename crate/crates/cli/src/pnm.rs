//! Binary PGM (P5) and PPM (P6) codec, maxval 255.
//!
//! The header is whitespace-delimited with `#` comment lines allowed
//! before the maxval; exactly one whitespace byte separates the maxval
//! from the raster. Parse errors carry the byte offset at which they
//! were detected, and encoding followed by decoding is the identity.

use std::path::Path;

use hubtrack_core::image::{GrayImage, Image, RgbImage};

#[derive(Debug, thiserror::Error)]
pub enum PnmError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported format {magic:?} at byte {offset} (expected P5 or P6)")]
    UnsupportedFormat { magic: String, offset: usize },
    #[error("malformed header: {what} at byte {offset}")]
    Malformed { what: &'static str, offset: usize },
    #[error("unsupported maxval {maxval} at byte {offset} (only 255)")]
    UnsupportedMaxval { maxval: u64, offset: usize },
    #[error("truncated raster at byte {offset}: expected {expected} bytes, found {got}")]
    Truncated {
        expected: usize,
        got: usize,
        offset: usize,
    },
    #[error("trailing data after raster at byte {offset}")]
    TrailingData { offset: usize },
    #[error("cannot encode an HSV image as PNM")]
    InvalidModel,
}

struct Tokenizer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tokenizer<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Skips whitespace and `#` comments; returns the next token and the
    /// byte offset it started at.
    fn token(&mut self) -> Option<(&'a [u8], usize)> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        if self.pos >= self.bytes.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        Some((&self.bytes[start..self.pos], start))
    }
}

fn parse_number(tok: &[u8], offset: usize, what: &'static str) -> Result<u64, PnmError> {
    let s = std::str::from_utf8(tok).map_err(|_| PnmError::Malformed { what, offset })?;
    s.parse().map_err(|_| PnmError::Malformed { what, offset })
}

/// Decodes a binary PGM or PPM from memory.
pub fn decode_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    let mut tok = Tokenizer::new(bytes);
    let (magic, magic_off) = tok.token().ok_or(PnmError::Malformed {
        what: "missing magic number",
        offset: 0,
    })?;
    let channels = match magic {
        b"P5" => 1usize,
        b"P6" => 3,
        other => {
            return Err(PnmError::UnsupportedFormat {
                magic: String::from_utf8_lossy(other).into_owned(),
                offset: magic_off,
            })
        }
    };

    let (wt, woff) = tok.token().ok_or(PnmError::Malformed {
        what: "missing width",
        offset: bytes.len(),
    })?;
    let width = parse_number(wt, woff, "width is not a number")? as usize;
    let (ht, hoff) = tok.token().ok_or(PnmError::Malformed {
        what: "missing height",
        offset: bytes.len(),
    })?;
    let height = parse_number(ht, hoff, "height is not a number")? as usize;
    if width < 1 || height < 1 {
        return Err(PnmError::Malformed {
            what: "zero image dimension",
            offset: woff,
        });
    }
    let (mt, moff) = tok.token().ok_or(PnmError::Malformed {
        what: "missing maxval",
        offset: bytes.len(),
    })?;
    let maxval = parse_number(mt, moff, "maxval is not a number")?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval {
            maxval,
            offset: moff,
        });
    }

    // Exactly one whitespace byte between maxval and raster.
    let raster_start = tok.pos + 1;
    if tok.pos >= bytes.len() || !bytes[tok.pos].is_ascii_whitespace() {
        return Err(PnmError::Malformed {
            what: "missing whitespace after maxval",
            offset: tok.pos,
        });
    }

    let expected = width * height * channels;
    let raster = &bytes[raster_start..];
    if raster.len() < expected {
        return Err(PnmError::Truncated {
            expected,
            got: raster.len(),
            offset: raster_start + raster.len(),
        });
    }
    if raster.len() > expected {
        return Err(PnmError::TrailingData {
            offset: raster_start + expected,
        });
    }

    let data = raster.to_vec();
    Ok(if channels == 1 {
        Image::Gray8(GrayImage::from_vec(width, height, data))
    } else {
        Image::Rgb8(RgbImage::from_vec(width, height, data))
    })
}

/// Encodes a Gray8 image as P5 or an RGB8 image as P6.
pub fn encode_pnm(image: &Image) -> Result<Vec<u8>, PnmError> {
    let (magic, data): (&str, &[u8]) = match image {
        Image::Gray8(img) => ("P5", img.as_slice()),
        Image::Rgb8(img) => ("P6", img.as_slice()),
        Image::Hsv(_) => return Err(PnmError::InvalidModel),
    };
    let mut out = format!(
        "{magic}\n{} {}\n255\n",
        image.width(),
        image.height()
    )
    .into_bytes();
    out.extend_from_slice(data);
    Ok(out)
}

pub fn load_pnm(path: &Path) -> Result<Image, PnmError> {
    let bytes = std::fs::read(path).map_err(|source| PnmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode_pnm(&bytes)
}

pub fn save_pnm(image: &Image, path: &Path) -> Result<(), PnmError> {
    let bytes = encode_pnm(image)?;
    std::fs::write(path, bytes).map_err(|source| PnmError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hubtrack_core::image::PixelModel;

    #[test]
    fn decodes_p5() {
        let bytes = b"P5 2 2 255 \x00\x40\x80\xff";
        let img = decode_pnm(bytes).unwrap();
        assert_eq!(img.model(), PixelModel::Gray8);
        match img {
            Image::Gray8(g) => assert_eq!(g.as_slice(), &[0, 64, 128, 255]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn decodes_p6_red_pixel() {
        let bytes = b"P6\n1 1\n255\n\xff\x00\x00";
        let img = decode_pnm(bytes).unwrap();
        match img {
            Image::Rgb8(rgb) => assert_eq!(rgb.get(0, 0), [255, 0, 0]),
            _ => panic!("expected RGB8"),
        }
    }

    #[test]
    fn decodes_header_comments() {
        let bytes = b"P5\n# made by hand\n2 1\n# another note\n255\n\x01\x02";
        let img = decode_pnm(bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
    }

    #[test]
    fn rejects_p4_with_offset() {
        match decode_pnm(b"P4\n2 2\n255\n....") {
            Err(PnmError::UnsupportedFormat { magic, offset }) => {
                assert_eq!(magic, "P4");
                assert_eq!(offset, 0);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_maxval_with_offset() {
        match decode_pnm(b"P5 2 2 65535 xx") {
            Err(PnmError::UnsupportedMaxval { maxval, offset }) => {
                assert_eq!(maxval, 65535);
                assert_eq!(offset, 7);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_truncated_raster() {
        match decode_pnm(b"P5 2 2 255 \x01\x02\x03") {
            Err(PnmError::Truncated { expected, got, .. }) => {
                assert_eq!(expected, 4);
                assert_eq!(got, 3);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn rejects_trailing_bytes() {
        assert!(matches!(
            decode_pnm(b"P5 1 1 255 \x01\x02"),
            Err(PnmError::TrailingData { .. })
        ));
    }

    #[test]
    fn rejects_garbage_header() {
        assert!(matches!(
            decode_pnm(b"P5 two 2 255 ab"),
            Err(PnmError::Malformed { .. })
        ));
        assert!(matches!(
            decode_pnm(b"P5 2 2"),
            Err(PnmError::Malformed { .. })
        ));
    }

    #[test]
    fn p6_single_pixel_is_14_bytes() {
        let img = Image::Rgb8(RgbImage::from_vec(1, 1, vec![255, 0, 0]));
        let bytes = encode_pnm(&img).unwrap();
        assert_eq!(bytes.len(), 14);
        assert_eq!(&bytes[..11], b"P6\n1 1\n255\n");
    }

    #[test]
    fn hsv_cannot_be_encoded() {
        let img = Image::Hsv(hubtrack_core::image::HsvImage::new(2, 2));
        assert!(matches!(encode_pnm(&img), Err(PnmError::InvalidModel)));
    }

    #[test]
    fn gray_round_trip() {
        let img = Image::Gray8(GrayImage::from_vec(2, 2, vec![0, 64, 128, 255]));
        let decoded = decode_pnm(&encode_pnm(&img).unwrap()).unwrap();
        assert_eq!(decoded, img);
    }
}
