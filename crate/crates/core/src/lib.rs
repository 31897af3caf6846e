//! Single-pass coherence-transport inpainting with pluggable fill orders.

pub mod cli;
pub mod contours;
pub mod distance;
pub mod domain;
pub mod error;
pub mod fixtures;
pub mod guidance;
pub mod io;
pub mod metrics;
pub mod pipeline;
pub mod raster;
pub mod service;
pub mod transport;

pub use distance::{DistanceField, DistanceKind};
pub use domain::{BallStencil, InpaintDomain};
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, RunOutput, RunParams, RunReport};
pub use raster::{BoolGrid, Grid, PixelCoord, RasterImage, Vec2};
pub use transport::{inpaint, FillParams, Kernel};
