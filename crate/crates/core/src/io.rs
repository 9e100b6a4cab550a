//! Image files: 8-bit PNG and binary PPM (P6) in; PNG or PPM out.

use std::fs;
use std::io::Write;
use std::path::Path;

use image::{ColorType, DynamicImage, ImageError, ImageFormat};

use crate::error::{Error, Result};
use crate::pipeline::{EdgeMap, RgbImage};

fn decode_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::Unsupported(e) => Error::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: e.to_string(),
        },
        // decoding reads from memory, so I/O errors mean truncated data
        other => Error::CorruptImage {
            path: path.to_path_buf(),
            detail: other.to_string(),
        },
    }
}

/// Decodes an 8-bit PNG (RGB, RGBA, gray or gray+alpha) or a binary PPM.
/// Alpha is dropped; gray is replicated into all three channels.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let bytes = fs::read(path)?;
    let unsupported = |detail: &str| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };
    let format = match image::guess_format(&bytes) {
        Ok(ImageFormat::Png) => ImageFormat::Png,
        Ok(ImageFormat::Pnm) if bytes.starts_with(b"P6") => ImageFormat::Pnm,
        Ok(ImageFormat::Pnm) => return Err(unsupported("only binary PPM (P6) is supported")),
        Ok(other) => return Err(unsupported(&format!("{other:?} is not supported"))),
        Err(_) => return Err(unsupported("unrecognized file signature")),
    };
    let decoded =
        image::load_from_memory_with_format(&bytes, format).map_err(|e| decode_error(path, e))?;
    let rgb = match decoded.color() {
        ColorType::Rgb8 | ColorType::Rgba8 | ColorType::L8 | ColorType::La8 => decoded.to_rgb8(),
        other => return Err(unsupported(&format!("{other:?} samples; expected 8-bit"))),
    };
    let (cols, rows) = rgb.dimensions();
    let data = rgb.pixels().map(|p| p.0).collect();
    Ok(RgbImage::new(rows as usize, cols as usize, data))
}

fn encode_error(path: &Path, err: ImageError) -> Error {
    match err {
        ImageError::IoError(e) => Error::Io(e),
        other => Error::Encode {
            path: path.to_path_buf(),
            detail: other.to_string(),
        },
    }
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

/// Writes a color image as PPM (P6) when the extension is `.ppm`, PNG otherwise.
pub fn save_image(img: &RgbImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let raw: Vec<u8> = img.pixels().iter().flatten().copied().collect();
    if has_extension(path, "ppm") {
        let mut file = fs::File::create(path)?;
        write!(file, "P6\n{} {}\n255\n", img.cols(), img.rows())?;
        file.write_all(&raw)?;
        return Ok(());
    }
    let buffer = image::RgbImage::from_raw(img.cols() as u32, img.rows() as u32, raw)
        .expect("buffer matches dimensions");
    DynamicImage::ImageRgb8(buffer)
        .save_with_format(path, ImageFormat::Png)
        .map_err(|e| encode_error(path, e))
}

/// Writes an edge map as 8-bit grayscale PNG: edges 255, background 0.
pub fn save_edge_map(edges: &EdgeMap, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let raw = edges
        .data()
        .iter()
        .map(|&e| if e { 255 } else { 0 })
        .collect();
    let buffer = image::GrayImage::from_raw(edges.cols() as u32, edges.rows() as u32, raw)
        .expect("buffer matches dimensions");
    DynamicImage::ImageLuma8(buffer)
        .save_with_format(path, ImageFormat::Png)
        .map_err(|e| encode_error(path, e))
}

/// Reads an edge map written by [`save_edge_map`]; any nonzero gray is an edge.
pub fn load_edge_map(path: impl AsRef<Path>) -> Result<EdgeMap> {
    let img = load_image(path)?;
    let data = img.pixels().iter().map(|p| p[0] != 0).collect();
    Ok(EdgeMap::new(img.rows(), img.cols(), data))
}
