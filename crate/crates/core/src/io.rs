//! File input and output: PNG rasters, stop-set documents, distance dumps.

use std::io::Cursor;
use std::path::Path;

use image::{ColorType, DynamicImage, ImageFormat, ImageReader};

use crate::distance::stopset::{parse_stopset_str, ParsedStopSet};
use crate::distance::{tfld, DistanceField};
use crate::error::{Error, Result};
use crate::raster::{BoolGrid, Grid, RasterImage};

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Decodes an 8-bit gray or RGB PNG.
pub fn decode_png(bytes: &[u8]) -> Result<RasterImage> {
    let reader = ImageReader::with_format(Cursor::new(bytes), ImageFormat::Png);
    let img = reader.decode()?;
    from_dynamic(img)
}

fn from_dynamic(img: DynamicImage) -> Result<RasterImage> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    match img.color() {
        ColorType::L8 => {
            let buf = img.into_luma8();
            RasterImage::new(w, h, 1, buf.into_raw().into_iter().map(f64::from).collect())
        }
        ColorType::Rgb8 => {
            let buf = img.into_rgb8();
            RasterImage::new(w, h, 3, buf.into_raw().into_iter().map(f64::from).collect())
        }
        other => Err(Error::UnsupportedImage(format!(
            "expected 8-bit gray or RGB, got {other:?}"
        ))),
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    decode_png(&bytes)
}

/// Rounds half away from zero and clamps to `[0, 255]`.
pub fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Encodes as an 8-bit gray or RGB PNG.
pub fn encode_png(image: &RasterImage) -> Result<Vec<u8>> {
    let (w, h) = (image.width() as u32, image.height() as u32);
    let bytes: Vec<u8> = image.values().iter().map(|&v| quantize(v)).collect();
    let dynamic = match image.channels() {
        1 => DynamicImage::ImageLuma8(image::GrayImage::from_raw(w, h, bytes).expect("buffer size")),
        3 => DynamicImage::ImageRgb8(image::RgbImage::from_raw(w, h, bytes).expect("buffer size")),
        c => {
            return Err(Error::UnsupportedImage(format!(
                "cannot save {c}-channel image"
            )))
        }
    };
    let mut out = Cursor::new(Vec::new());
    dynamic.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

pub fn save_image(image: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_png(image)?;
    std::fs::write(path, bytes).map_err(|e| io_error(path, e))
}

/// Pixels with luminance at least 128 are masked.
pub fn mask_from_image(image: &RasterImage) -> BoolGrid {
    image.luminance().map(|&v| v >= 128.0)
}

pub fn decode_mask_png(bytes: &[u8]) -> Result<BoolGrid> {
    Ok(mask_from_image(&decode_png(bytes)?))
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<BoolGrid> {
    Ok(mask_from_image(&load_image(path)?))
}

/// Reads and validates a stop-set document for an image of the given size.
pub fn load_stopset(path: impl AsRef<Path>, width: usize, height: usize) -> Result<ParsedStopSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_stopset_str(&text, width, height)
}

/// Writes a distance field as a TFLD raster.
pub fn save_field(field: &DistanceField, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, tfld::encode(field)).map_err(|e| io_error(path, e))
}

pub fn load_field(path: impl AsRef<Path>) -> Result<DistanceField> {
    let path = path.as_ref();
    tfld::decode(&std::fs::read(path).map_err(|e| io_error(path, e))?)
}

/// Mask as a white-on-black gray image.
pub fn mask_to_image(mask: &BoolGrid) -> RasterImage {
    let gray: Grid<f64> = mask.map(|&m| if m { 255.0 } else { 0.0 });
    RasterImage::from_gray(&gray).expect("mask values are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::PixelCoord;

    #[test]
    fn rounding_rule() {
        assert_eq!(quantize(254.5), 255);
        assert_eq!(quantize(0.5), 1);
        assert_eq!(quantize(0.49), 0);
        assert_eq!(quantize(300.0), 255);
    }

    #[test]
    fn gray_and_rgb_round_trip() {
        let gray = RasterImage::new(3, 2, 1, vec![0.0, 1.0, 2.0, 127.0, 128.0, 255.0]).unwrap();
        assert_eq!(decode_png(&encode_png(&gray).unwrap()).unwrap(), gray);
        let rgb = RasterImage::new(1, 2, 3, vec![1.0, 2.0, 3.0, 250.0, 251.0, 252.0]).unwrap();
        assert_eq!(decode_png(&encode_png(&rgb).unwrap()).unwrap(), rgb);
    }

    #[test]
    fn sixteen_bit_is_rejected() {
        let img = DynamicImage::ImageLuma16(image::ImageBuffer::from_raw(2, 2, vec![0u16, 1, 2, 3]).unwrap());
        let mut out = Cursor::new(Vec::new());
        img.write_to(&mut out, ImageFormat::Png).unwrap();
        assert!(matches!(decode_png(&out.into_inner()), Err(Error::UnsupportedImage(_))));
    }

    #[test]
    fn garbage_is_an_image_error() {
        assert!(matches!(decode_png(b"not a png"), Err(Error::Image(_))));
    }

    #[test]
    fn mask_threshold() {
        let img = RasterImage::new(3, 1, 1, vec![127.0, 128.0, 255.0]).unwrap();
        let m = mask_from_image(&img);
        assert!(!m.at(PixelCoord::new(0, 0)));
        assert!(m.at(PixelCoord::new(0, 1)) && m.at(PixelCoord::new(0, 2)));
    }
}
