//! Binary lake masks and their on-disk containers.
//!
//! A mask is a row-major grid of {0, 1}, 1 marking lake pixels. Two lossless
//! containers are accepted: 8-bit single-channel PNG and PGM (P5 binary or
//! P2 ASCII — the latter so test fixtures can be written by hand). Anything
//! else (RGB, palette, 16-bit) is rejected rather than silently converted.

use std::fs;
use std::path::Path;

use image::DynamicImage;

use crate::error::{Error, Result};

/// Immutable binary mask; 1 = lake pixel, 0 = background.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    data: Vec<u8>,
    image_id: String,
}

impl BinaryMask {
    /// Builds a mask, validating the grid invariants: non-zero dimensions,
    /// `data.len() == width * height`, every cell 0 or 1.
    pub fn new(width: u32, height: u32, data: Vec<u8>, image_id: impl Into<String>) -> Result<Self> {
        let image_id = image_id.into();
        let invalid = |message: String| Error::InvalidMask {
            image_id: Some(image_id.clone()),
            message,
        };
        if width == 0 || height == 0 {
            return Err(invalid(format!("zero dimension ({width}x{height})")));
        }
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(invalid(format!(
                "data length {} does not match {width}x{height} = {expected}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&v| v > 1) {
            return Err(invalid(format!("cell {pos} holds {}, expected 0 or 1", data[pos])));
        }
        Ok(Self {
            width,
            height,
            data,
            image_id,
        })
    }

    /// Builds a mask from a predicate over (x, y); test convenience.
    pub fn from_fn(width: u32, height: u32, image_id: impl Into<String>, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(u8::from(f(x, y)));
            }
        }
        Self::new(width, height, data, image_id).expect("from_fn produces a valid grid")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn image_id(&self) -> &str {
        &self.image_id
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] == 1
    }

    pub fn foreground_count(&self) -> u64 {
        self.data.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn with_image_id(mut self, image_id: impl Into<String>) -> Self {
        self.image_id = image_id.into();
        self
    }
}

/// Loads a mask from an 8-bit grayscale PNG or a PGM (P5/P2) file.
///
/// Source pixels above `binarize_threshold` map to 1, the rest to 0. The
/// mask's `image_id` is the file stem. The container is detected from the
/// file's magic bytes, not its extension.
pub fn load_mask(path: &Path, binarize_threshold: u8) -> Result<BinaryMask> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (width, height, samples) = decode_gray8(path, &bytes)?;
    if width == 0 || height == 0 {
        return Err(Error::decode(path, format!("zero dimension ({width}x{height})")));
    }
    let data = samples
        .iter()
        .map(|&v| u8::from(v > binarize_threshold))
        .collect();
    BinaryMask::new(width, height, data, file_stem(path))
}

/// Writes a mask to `path`; the extension picks the container (`.png` or
/// `.pgm`). Lake pixels are written as 255 so the file is viewable and
/// round-trips exactly at any threshold below 255.
pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let samples: Vec<u8> = mask.data.iter().map(|&v| v * 255).collect();
    match ext.as_deref() {
        Some("png") => {
            let buf = image::GrayImage::from_raw(mask.width, mask.height, samples)
                .expect("sample buffer matches dimensions");
            buf.save_with_format(path, image::ImageFormat::Png)
                .map_err(|e| Error::decode(path, format!("png encode failed: {e}")))
        }
        Some("pgm") => {
            let mut out = format!("P5\n{} {}\n255\n", mask.width, mask.height).into_bytes();
            out.extend_from_slice(&samples);
            fs::write(path, out).map_err(|e| Error::io(path, e))
        }
        other => Err(Error::Config(format!(
            "unsupported mask extension {:?} for {} (use .png or .pgm)",
            other.unwrap_or(""),
            path.display()
        ))),
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Decodes to (width, height, one u8 sample per pixel), rejecting anything
/// that is not single-channel 8-bit.
fn decode_gray8(path: &Path, bytes: &[u8]) -> Result<(u32, u32, Vec<u8>)> {
    match bytes {
        [b'P', b'2', ..] | [b'P', b'5', ..] => decode_pgm(path, bytes),
        [0x89, b'P', b'N', b'G', ..] => decode_png(path, bytes),
        [b'P', m, ..] if (b'1'..=b'6').contains(m) => Err(Error::decode(
            path,
            format!("unsupported netpbm magic P{} (only PGM P2/P5 accepted)", *m as char),
        )),
        _ => Err(Error::decode(path, "not a PNG or PGM file")),
    }
}

fn decode_png(path: &Path, bytes: &[u8]) -> Result<(u32, u32, Vec<u8>)> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| Error::decode(path, format!("png decode failed: {e}")))?;
    match img {
        DynamicImage::ImageLuma8(buf) => Ok((buf.width(), buf.height(), buf.into_raw())),
        other => Err(Error::decode(
            path,
            format!(
                "expected 8-bit single-channel data, got {:?}",
                other.color()
            ),
        )),
    }
}

fn decode_pgm(path: &Path, bytes: &[u8]) -> Result<(u32, u32, Vec<u8>)> {
    let mut cursor = PgmCursor::new(bytes);
    let magic = cursor.token(path)?;
    let width: u32 = cursor.int(path, "width")?;
    let height: u32 = cursor.int(path, "height")?;
    let maxval: u32 = cursor.int(path, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::decode(
            path,
            format!("maxval {maxval} outside 1..=255 (multi-byte samples unsupported)"),
        ));
    }
    let count = width as usize * height as usize;
    let samples = match magic.as_slice() {
        b"P5" => {
            // Single whitespace byte separates the header from raw samples.
            let start = cursor.pos + 1;
            let end = start + count;
            if bytes.len() < end {
                return Err(Error::decode(
                    path,
                    format!("raw data truncated: need {count} bytes, have {}", bytes.len().saturating_sub(start)),
                ));
            }
            bytes[start..end].to_vec()
        }
        b"P2" => {
            let mut samples = Vec::with_capacity(count);
            for i in 0..count {
                let v: u32 = cursor.int(path, "sample")?;
                if v > maxval {
                    return Err(Error::decode(path, format!("sample {i} = {v} exceeds maxval {maxval}")));
                }
                samples.push(v as u8);
            }
            samples
        }
        _ => unreachable!("dispatched on magic"),
    };
    Ok((width, height, samples))
}

/// Token reader over a PGM header/body, skipping whitespace and `#` comments.
struct PgmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmCursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn token(&mut self, path: &Path) -> Result<Vec<u8>> {
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
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::decode(path, "unexpected end of PGM header"));
        }
        Ok(self.bytes[start..self.pos].to_vec())
    }

    fn int(&mut self, path: &Path, what: &str) -> Result<u32> {
        let tok = self.token(path)?;
        std::str::from_utf8(&tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::decode(
                    path,
                    format!("invalid {what} token {:?}", String::from_utf8_lossy(&tok)),
                )
            })
    }
}
