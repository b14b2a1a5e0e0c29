use std::io::Cursor;
use std::path::Path;

use image::{GrayImage, ImageFormat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageIoError {
    #[error("pixel buffer has {actual} bytes, expected {expected}")]
    Size { expected: usize, actual: usize },
    #[error(transparent)]
    Codec(#[from] image::ImageError),
}

/// 8-bit single-channel bitmap, row major. 255 is white paper, 0 is ink.
#[derive(Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for RasterImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RasterImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("ink", &self.ink_count())
            .finish()
    }
}

impl RasterImage {
    pub fn white(width: u32, height: u32) -> Self {
        Self::filled(width, height, 255)
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width as usize * height as usize],
        }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageIoError> {
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ImageIoError::Size {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
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

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn row(&self, y: u32) -> &[u8] {
        let w = self.width as usize;
        &self.pixels[y as usize * w..(y as usize + 1) * w]
    }

    /// Pixels that are not pure white.
    pub fn ink_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p < 255).count()
    }

    pub fn black_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p == 0).count()
    }

    pub fn is_binary(&self) -> bool {
        self.pixels.iter().all(|&p| p == 0 || p == 255)
    }

    pub fn to_png(&self) -> Result<Vec<u8>, ImageIoError> {
        let img = GrayImage::from_raw(self.width, self.height, self.pixels.clone())
            .expect("buffer length matches dimensions");
        let mut out = Cursor::new(Vec::new());
        img.write_to(&mut out, ImageFormat::Png)?;
        Ok(out.into_inner())
    }

    /// Decodes any supported PNG, converting colour to luminance.
    pub fn from_png(bytes: &[u8]) -> Result<Self, ImageIoError> {
        let gray = image::load_from_memory_with_format(bytes, ImageFormat::Png)?.into_luma8();
        let (width, height) = gray.dimensions();
        Ok(Self {
            width,
            height,
            pixels: gray.into_raw(),
        })
    }

    pub fn read_png(path: &Path) -> Result<Self, ImageIoError> {
        let gray = image::open(path)?.into_luma8();
        let (width, height) = gray.dimensions();
        Ok(Self {
            width,
            height,
            pixels: gray.into_raw(),
        })
    }
}

/// Width and height from an image header without decoding pixels.
pub fn image_dimensions(path: &Path) -> Result<(u32, u32), ImageIoError> {
    Ok(image::image_dimensions(path)?)
}
