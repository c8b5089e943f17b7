use std::fs;
use std::path::Path;

use nodal_core::census::SignField;

use crate::{LabError, Result};

/// Binary PGM (`P5`) bytes for an 8-bit row-major image.
pub fn encode(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    assert_eq!(
        pixels.len(),
        width * height,
        "pixel count does not match dimensions"
    );
    let mut out = format!("P5 {width} {height} 255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn encode_field(field: &SignField) -> Vec<u8> {
    let side = field.side();
    encode(side, side, &field.graymap())
}

pub fn write_field(path: &Path, field: &SignField) -> Result<()> {
    fs::write(path, encode_field(field)).map_err(|e| LabError::io(path, e))
}

/// Splits a `P5` image into its dimensions and pixels.
pub fn decode(bytes: &[u8]) -> Option<(usize, usize, &[u8])> {
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while bytes.get(pos)?.is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while !bytes.get(pos)?.is_ascii_whitespace() {
            pos += 1;
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).ok()?);
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    if fields[0] != "P5" || fields[3] != "255" {
        return None;
    }
    let w: usize = fields[1].parse().ok()?;
    let h: usize = fields[2].parse().ok()?;
    let pixels = bytes.get(pos..)?;
    (pixels.len() == w * h).then_some((w, h, pixels))
}
