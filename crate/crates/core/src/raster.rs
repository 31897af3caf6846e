//! Pixel grids.
//!
//! Pixels are addressed by `(i, j)` = (row, column) and identified with their
//! integer midpoints, so the grid spacing is one pixel.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row/column pixel address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct PixelCoord {
    pub i: usize,
    pub j: usize,
}

impl PixelCoord {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    /// Neighbor at signed offset, if it stays on a `width` x `height` grid.
    #[inline]
    pub fn offset(self, di: isize, dj: isize, width: usize, height: usize) -> Option<Self> {
        let i = self.i as isize + di;
        let j = self.j as isize + dj;
        if i < 0 || j < 0 || i >= height as isize || j >= width as isize {
            None
        } else {
            Some(Self::new(i as usize, j as usize))
        }
    }

    pub fn distance(self, other: Self) -> f64 {
        let di = self.i as f64 - other.i as f64;
        let dj = self.j as f64 - other.j as f64;
        di.hypot(dj)
    }
}

impl From<[usize; 2]> for PixelCoord {
    fn from([i, j]: [usize; 2]) -> Self {
        Self { i, j }
    }
}

impl From<PixelCoord> for [usize; 2] {
    fn from(p: PixelCoord) -> Self {
        [p.i, p.j]
    }
}

impl fmt::Display for PixelCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// Planar vector in (row, column) components.
pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Unit vector along `a`, or the zero vector when `a` vanishes.
#[inline]
pub fn normalize(a: Vec2) -> Vec2 {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        [a[0] / n, a[1] / n]
    } else {
        [0.0, 0.0]
    }
}

/// `a` rotated by a quarter turn.
#[inline]
pub fn perp(a: Vec2) -> Vec2 {
    [-a[1], a[0]]
}

pub(crate) const FOUR_NEIGHBORS: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];

pub(crate) const EIGHT_NEIGHBORS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Dense row-major single-valued grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

pub type BoolGrid = Grid<bool>;

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                actual: (data.len(), 1),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(PixelCoord) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                data.push(f(PixelCoord::new(i, j)));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn index(&self, p: PixelCoord) -> usize {
        debug_assert!(p.i < self.height && p.j < self.width);
        p.i * self.width + p.j
    }

    #[inline]
    pub fn coord(&self, index: usize) -> PixelCoord {
        PixelCoord::new(index / self.width, index % self.width)
    }

    #[inline]
    pub fn contains(&self, i: isize, j: isize) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.height && (j as usize) < self.width
    }

    #[inline]
    pub fn get(&self, p: PixelCoord) -> &T {
        &self.data[p.i * self.width + p.j]
    }

    #[inline]
    pub fn get_mut(&mut self, p: PixelCoord) -> &mut T {
        &mut self.data[p.i * self.width + p.j]
    }

    #[inline]
    pub fn set(&mut self, p: PixelCoord, value: T) {
        self.data[p.i * self.width + p.j] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn coords(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        (0..self.data.len()).map(|k| self.coord(k))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Copy> Grid<T> {
    #[inline]
    pub fn at(&self, p: PixelCoord) -> T {
        self.data[p.i * self.width + p.j]
    }
}

impl BoolGrid {
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn true_coords(&self) -> impl Iterator<Item = PixelCoord> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| self.coord(k))
    }
}

/// Multi-channel image with real gray levels in `[0, 255]`, channels interleaved.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    values: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::EmptyImage);
        }
        if values.len() != width * height * channels {
            return Err(Error::DimensionMismatch {
                expected: (width, height),
                actual: (values.len() / (channels * height).max(1), height),
            });
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0 || **v > 255.0)
        {
            return Err(Error::ValueOutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            channels,
            values,
        })
    }

    /// Constant image.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn from_gray(gray: &Grid<f64>) -> Result<Self> {
        Self::new(gray.width(), gray.height(), 1, gray.as_slice().to_vec())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn pixel(&self, p: PixelCoord) -> &[f64] {
        let start = (p.i * self.width + p.j) * self.channels;
        &self.values[start..start + self.channels]
    }

    #[inline]
    pub(crate) fn pixel_mut(&mut self, p: PixelCoord) -> &mut [f64] {
        let start = (p.i * self.width + p.j) * self.channels;
        &mut self.values[start..start + self.channels]
    }

    #[inline]
    pub fn value(&self, p: PixelCoord, channel: usize) -> f64 {
        self.values[(p.i * self.width + p.j) * self.channels + channel]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// One channel as a grid.
    pub fn channel(&self, channel: usize) -> Grid<f64> {
        let data = self
            .values
            .iter()
            .skip(channel)
            .step_by(self.channels)
            .copied()
            .collect();
        Grid {
            width: self.width,
            height: self.height,
            data,
        }
    }

    /// Channel mean per pixel.
    pub fn luminance(&self) -> Grid<f64> {
        let c = self.channels as f64;
        let data = self
            .values
            .chunks_exact(self.channels)
            .map(|px| px.iter().sum::<f64>() / c)
            .collect();
        Grid {
            width: self.width,
            height: self.height,
            data,
        }
    }

    /// Gray image replicated into three channels; RGB input is cloned.
    pub fn to_rgb(&self) -> RasterImage {
        match self.channels {
            3 => self.clone(),
            _ => {
                let lum = self.luminance();
                let values = lum.as_slice().iter().flat_map(|&v| [v, v, v]).collect();
                RasterImage {
                    width: self.width,
                    height: self.height,
                    channels: 3,
                    values,
                }
            }
        }
    }

    /// Smallest and largest value over all pixels where `select` is true.
    pub fn range_where(&self, select: impl Fn(PixelCoord) -> bool) -> Option<(f64, f64)> {
        let mut range: Option<(f64, f64)> = None;
        for i in 0..self.height {
            for j in 0..self.width {
                let p = PixelCoord::new(i, j);
                if !select(p) {
                    continue;
                }
                for &v in self.pixel(p) {
                    range = Some(match range {
                        None => (v, v),
                        Some((lo, hi)) => (lo.min(v), hi.max(v)),
                    });
                }
            }
        }
        range
    }
}
