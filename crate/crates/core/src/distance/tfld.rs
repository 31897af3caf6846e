//! `TFLD` binary raster for distance fields.
//!
//! Layout (little-endian):
//!
//! | offset | size | content                                        |
//! |--------|------|------------------------------------------------|
//! | 0      | 4    | magic `TFLD`                                   |
//! | 4      | 4    | width, `u32`                                   |
//! | 8      | 4    | height, `u32`                                  |
//! | 12     | 4    | distance kind code, `u32` (0 dtb, 1 harmonic, 2 active-dtb, 3 skeleton) |
//! | 16     | 4·w·h | row-major `f32` values, `NaN` where undefined |

use crate::error::{Error, Result};
use crate::raster::Grid;

use super::{DistanceField, DistanceKind};

pub const MAGIC: &[u8; 4] = b"TFLD";
pub const HEADER_LEN: usize = 16;

pub fn encode(field: &DistanceField) -> Vec<u8> {
    let (w, h) = field.dims();
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * w * h);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(w as u32).to_le_bytes());
    out.extend_from_slice(&(h as u32).to_le_bytes());
    out.extend_from_slice(&field.kind().code().to_le_bytes());
    for &v in field.values().as_slice() {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

/// Decodes a raster; values are widened back to `f64`.
pub fn decode(bytes: &[u8]) -> Result<DistanceField> {
    if bytes.len() < HEADER_LEN || &bytes[..4] != MAGIC {
        return Err(Error::FieldFormat("missing TFLD header".into()));
    }
    let word = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().unwrap());
    let (w, h) = (word(4) as usize, word(8) as usize);
    let kind = DistanceKind::from_code(word(12))
        .ok_or_else(|| Error::FieldFormat(format!("unknown kind code {}", word(12))))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != 4 * w * h {
        return Err(Error::FieldFormat(format!(
            "expected {} payload bytes for {w}x{h}, found {}",
            4 * w * h,
            payload.len()
        )));
    }
    let values = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    Ok(DistanceField::new(Grid::from_vec(w, h, values)?, kind))
}
