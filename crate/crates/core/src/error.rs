use std::path::PathBuf;

use crate::raster::PixelCoord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("image must have width, height and channel count >= 1")]
    EmptyImage,

    #[error("pixel value {value} at index {index} is not a finite gray level in [0, 255]")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("inpainting mask is empty")]
    EmptyMask,

    #[error("every pixel is masked, there is no data to inpaint from")]
    NoData,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stop set is empty")]
    EmptyStopSet,

    #[error("curve {curve} pixel {pixel} lies outside the image")]
    CurveOutsideImage { curve: usize, pixel: PixelCoord },

    #[error("stop curve {curve} pixel {pixel} lies outside the inpainting domain")]
    CurveOutsideDomain { curve: usize, pixel: PixelCoord },

    #[error("stop curve {curve} pixel {pixel} lies on the domain boundary")]
    CurveOnBoundary { curve: usize, pixel: PixelCoord },

    #[error("stop curve {curve} needs a distance value t > 0, got {t}")]
    NonPositiveDistance { curve: usize, t: f64 },

    #[error("harmonic solve did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no boundary pixel satisfies <g,N>^2 > {gamma}; lower the threshold")]
    EmptyActiveBoundary { gamma: f64 },

    #[error("distance field is not admissible: {} pixel(s) are interior local minima", offending.len())]
    Inadmissible { offending: Vec<PixelCoord> },

    #[error("pixel {pixel} has no known neighbor within the averaging radius")]
    StarvedPixel { pixel: PixelCoord },

    #[error("malformed stop-set document: {0}")]
    StopSetFormat(String),

    #[error("malformed distance raster: {0}")]
    FieldFormat(String),

    #[error("unsupported image format: {0}")]
    UnsupportedImage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Image(#[from] image::ImageError),
}
