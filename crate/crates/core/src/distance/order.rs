use std::fmt;

use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::raster::{Grid, PixelCoord};

use super::{check_admissible, DistanceField};

/// One serialized pixel, written `[i j T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderEntry {
    pub pixel: PixelCoord,
    pub t: f64,
}

impl fmt::Display for OrderEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} {}]", self.pixel.i, self.pixel.j, self.t)
    }
}

/// Masked pixels sorted ascending by `T`, ties in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelOrder {
    entries: Vec<OrderEntry>,
    rank: Grid<usize>,
}

impl PixelOrder {
    /// Orders the masked pixels without checking admissibility.
    pub fn sorted_unchecked(field: &DistanceField, domain: &InpaintDomain) -> Self {
        let mut entries: Vec<OrderEntry> = domain
            .masked_pixels()
            .map(|p| OrderEntry {
                pixel: p,
                t: field.value(p),
            })
            .collect();
        // masked_pixels is row-major, and the sort is stable
        entries.sort_by(|a, b| a.t.total_cmp(&b.t));
        let (w, h) = domain.dims();
        let mut rank = Grid::filled(w, h, usize::MAX);
        for (k, e) in entries.iter().enumerate() {
            rank.set(e.pixel, k);
        }
        Self { entries, rank }
    }

    pub fn entries(&self) -> &[OrderEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn pixel(&self, k: usize) -> PixelCoord {
        self.entries[k].pixel
    }

    /// Position of `p` in the order, `None` for pixels outside the mask.
    #[inline]
    pub fn rank(&self, p: PixelCoord) -> Option<usize> {
        match self.rank.at(p) {
            usize::MAX => None,
            r => Some(r),
        }
    }

    pub fn pixels(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        self.entries.iter().map(|e| e.pixel)
    }

    /// One `[i j T]` line per pixel.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.entries.len() * 16);
        for e in &self.entries {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }
}

/// Serializes the masked pixels by ascending `field`, refusing inadmissible fields.
pub fn serialize_pixels(field: &DistanceField, domain: &InpaintDomain) -> Result<PixelOrder> {
    let report = check_admissible(field, domain);
    if !report.valid {
        return Err(Error::Inadmissible {
            offending: report.offending_pixels,
        });
    }
    Ok(PixelOrder::sorted_unchecked(field, domain))
}
