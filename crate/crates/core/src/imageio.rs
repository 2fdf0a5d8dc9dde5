//! 8-bit grayscale PGM reading and writing.
//!
//! The reader accepts both ASCII (`P2`) and binary (`P5`) graymaps with a
//! maxval of 255 and `#` comments anywhere in the header. The writer always
//! emits the canonical binary form `P5\n<w> <h>\n255\n<payload>`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0}, only 255 is supported")]
    UnsupportedMaxval(u32),
    #[error("truncated payload: expected {expected} pixels, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("image dimensions {width}x{height} do not match {len} pixels")]
    SizeMismatch {
        width: usize,
        height: usize,
        len: usize,
    },
}

impl PgmError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MalformedHeader(_) => "MalformedHeader",
            Self::UnsupportedMaxval(_) => "UnsupportedMaxval",
            Self::TruncatedPayload { .. } => "TruncatedPayload",
            Self::SizeMismatch { .. } => "SizeMismatch",
        }
    }
}

/// A row-major 8-bit grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlainImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl PlainImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, PgmError> {
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(PgmError::SizeMismatch {
                width,
                height,
                len: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn next_number(&mut self, what: &str) -> Result<u32, PgmError> {
        let tok = self
            .next_token()
            .ok_or_else(|| PgmError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| {
                PgmError::MalformedHeader(format!(
                    "invalid {what} token {:?}",
                    String::from_utf8_lossy(tok)
                ))
            })
    }
}

/// Parses a `P2` or `P5` graymap with maxval 255.
pub fn read_pgm(bytes: &[u8]) -> Result<PlainImage, PgmError> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    let binary = match cur.next_token() {
        Some(b"P5") => true,
        Some(b"P2") => false,
        Some(other) => {
            return Err(PgmError::MalformedHeader(format!(
                "bad magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
        None => return Err(PgmError::MalformedHeader("empty input".into())),
    };
    let width = cur.next_number("width")? as usize;
    let height = cur.next_number("height")? as usize;
    let maxval = cur.next_number("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| PgmError::MalformedHeader("dimensions overflow".into()))?;

    let pixels = if binary {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            Some(_) => {
                return Err(PgmError::MalformedHeader(
                    "no whitespace after maxval".into(),
                ))
            }
            None => {}
        }
        let payload = &bytes[cur.pos.min(bytes.len())..];
        if payload.len() < expected {
            return Err(PgmError::TruncatedPayload {
                expected,
                found: payload.len(),
            });
        }
        payload[..expected].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            match cur.next_token() {
                None => {
                    return Err(PgmError::TruncatedPayload {
                        expected,
                        found: pixels.len(),
                    })
                }
                Some(tok) => {
                    let v = std::str::from_utf8(tok)
                        .ok()
                        .and_then(|s| s.parse::<u32>().ok())
                        .filter(|&v| v <= 255)
                        .ok_or_else(|| {
                            PgmError::MalformedHeader(format!(
                                "invalid sample {:?}",
                                String::from_utf8_lossy(tok)
                            ))
                        })?;
                    pixels.push(v as u8);
                }
            }
        }
        pixels
    };

    Ok(PlainImage {
        width,
        height,
        pixels,
    })
}

/// Encodes `image` as canonical binary `P5`.
pub fn write_pgm(image: &PlainImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + image.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&image.pixels);
    out
}
