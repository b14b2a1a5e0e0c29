//! Scan-artifact corruptions: pixelation, bolding and white-space padding.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par;
use crate::texlayout::RasterImage;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("pixelation factor {factor} invalid for a {width}x{height} image")]
    InvalidFactor {
        factor: f64,
        width: u32,
        height: u32,
    },
    #[error("bolding needs a binary image (only 0 and 255)")]
    NotBinary,
    #[error("invalid transform config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformConfig {
    /// Pixelation factor is drawn uniformly from `[low, high]`.
    pub pixelate_factor_range: [f64; 2],
    /// Bolding radius, which is also its hot-pixel threshold.
    pub bold_n: u32,
    pub binarize_threshold: u8,
    /// Maximum white columns added on each side.
    pub pad_max: u32,
    pub bold_prob: f64,
    pub pixelate_prob: f64,
    pub pad_prob: f64,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            pixelate_factor_range: [1.5, 3.0],
            bold_n: 2,
            binarize_threshold: 128,
            pad_max: 40,
            bold_prob: 0.5,
            pixelate_prob: 0.5,
            pad_prob: 0.5,
        }
    }
}

impl TransformConfig {
    pub fn validate(&self) -> Result<(), TransformError> {
        let [low, high] = self.pixelate_factor_range;
        if !(low >= 1.0 && high >= low && high.is_finite()) {
            return Err(TransformError::Config(
                "pixelate_factor_range must satisfy 1 <= low <= high".into(),
            ));
        }
        if self.bold_n < 1 {
            return Err(TransformError::Config("bold_n must be >= 1".into()));
        }
        for (name, p) in [
            ("bold_prob", self.bold_prob),
            ("pixelate_prob", self.pixelate_prob),
            ("pad_prob", self.pad_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(TransformError::Config(format!("{name} must be in [0, 1]")));
            }
        }
        Ok(())
    }
}

/// A transform that was applied, with its drawn parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum AppliedTransform {
    Bold { n: u32, threshold: u8 },
    Pixelate { factor: f64 },
    Pad { left: u32, right: u32 },
}

/// Bilinear resampling with pixel-centre alignment and clamped edges.
fn resize_bilinear(img: &RasterImage, width: u32, height: u32) -> RasterImage {
    let (sw, sh) = (img.width() as usize, img.height() as usize);
    let sx = sw as f64 / width as f64;
    let sy = sh as f64 / height as f64;
    let mut out = vec![0u8; width as usize * height as usize];
    let src = img.pixels();
    // Column sample positions are shared by every row.
    let columns: Vec<(usize, usize, f64)> = (0..width as usize)
        .map(|x| {
            let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (sw - 1) as f64);
            let x0 = fx.floor() as usize;
            (x0, (x0 + 1).min(sw - 1), fx - x0 as f64)
        })
        .collect();
    par::for_each_row(&mut out, width as usize, |y, row| {
        let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (sh - 1) as f64);
        let y0 = fy.floor() as usize;
        let y1 = (y0 + 1).min(sh - 1);
        let ty = fy - y0 as f64;
        let (r0, r1) = (&src[y0 * sw..(y0 + 1) * sw], &src[y1 * sw..(y1 + 1) * sw]);
        for (px, &(x0, x1, tx)) in row.iter_mut().zip(&columns) {
            let top = f64::from(r0[x0]) * (1.0 - tx) + f64::from(r0[x1]) * tx;
            let bottom = f64::from(r1[x0]) * (1.0 - tx) + f64::from(r1[x1]) * tx;
            *px = (top * (1.0 - ty) + bottom * ty).round().clamp(0.0, 255.0) as u8;
        }
    });
    RasterImage::from_pixels(width, height, out).expect("sized buffer")
}

/// Downscales by `factor` and scales back up to the original size.
pub fn pixelate(img: &RasterImage, factor: f64) -> Result<RasterImage, TransformError> {
    let invalid = || TransformError::InvalidFactor {
        factor,
        width: img.width(),
        height: img.height(),
    };
    if !(factor >= 1.0 && factor.is_finite()) {
        return Err(invalid());
    }
    let small_w = (f64::from(img.width()) / factor).floor() as u32;
    let small_h = (f64::from(img.height()) / factor).floor() as u32;
    if small_w < 1 || small_h < 1 {
        return Err(invalid());
    }
    if small_w == img.width() && small_h == img.height() {
        return Ok(img.clone());
    }
    let small = resize_bilinear(img, small_w, small_h);
    Ok(resize_bilinear(&small, img.width(), img.height()))
}

/// Pixels below `threshold` become 0, the rest 255.
pub fn binarize(img: &RasterImage, threshold: u8) -> RasterImage {
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| if p < threshold { 0 } else { 255 })
        .collect();
    RasterImage::from_pixels(img.width(), img.height(), pixels).expect("same size")
}

/// Turns a white pixel black when at least `n` black pixels lie within
/// Chebyshev distance `n` of it. Every decision reads the input image.
///
/// Window counts come from a summed-area table, so the cost is
/// independent of `n`.
pub fn bold(img: &RasterImage, n: u32) -> Result<RasterImage, TransformError> {
    if !img.is_binary() {
        return Err(TransformError::NotBinary);
    }
    if n < 1 {
        return Err(TransformError::Config("bold radius must be >= 1".into()));
    }
    let (w, h) = (img.width() as usize, img.height() as usize);
    // table[(y + 1) * (w + 1) + (x + 1)] = black pixels in [0..=x] x [0..=y].
    let stride = w + 1;
    let mut table = vec![0u32; stride * (h + 1)];
    for y in 0..h {
        let mut row_sum = 0u32;
        for (x, &p) in img.row(y as u32).iter().enumerate() {
            row_sum += u32::from(p == 0);
            table[(y + 1) * stride + x + 1] = table[y * stride + x + 1] + row_sum;
        }
    }
    let r = n as usize;
    let src = img.pixels();
    let mut out = src.to_vec();
    par::for_each_row(&mut out, w, |y, row| {
        let (ya, yb) = (y.saturating_sub(r), (y + r).min(h - 1) + 1);
        for (x, px) in row.iter_mut().enumerate() {
            if *px == 0 {
                continue;
            }
            let (xa, xb) = (x.saturating_sub(r), (x + r).min(w - 1) + 1);
            let count = table[yb * stride + xb] + table[ya * stride + xa]
                - table[ya * stride + xb]
                - table[yb * stride + xa];
            if count >= n {
                *px = 0;
            }
        }
    });
    Ok(RasterImage::from_pixels(img.width(), img.height(), out).expect("same size"))
}

/// Adds `left` and `right` white columns.
pub fn pad_sides(img: &RasterImage, left: u32, right: u32) -> RasterImage {
    let width = img.width() + left + right;
    let mut out = RasterImage::white(width, img.height());
    for y in 0..img.height() {
        let start = (y * width + left) as usize;
        out.pixels_mut()[start..start + img.width() as usize].copy_from_slice(img.row(y));
    }
    out
}

/// Pads each side with a width drawn uniformly from `0..=pad_max`.
pub fn pad<R: Rng + ?Sized>(img: &RasterImage, rng: &mut R, pad_max: u32) -> RasterImage {
    let left = rng.gen_range(0..=pad_max);
    let right = rng.gen_range(0..=pad_max);
    pad_sides(img, left, right)
}

/// Applies each transform with its own probability, in the order
/// binarize + bold, pixelate, pad. All three coin flips are drawn up front
/// so the stream consumed does not depend on which ones fire.
pub fn apply_pipeline<R: Rng + ?Sized>(
    img: &RasterImage,
    cfg: &TransformConfig,
    rng: &mut R,
) -> Result<(RasterImage, Vec<AppliedTransform>), TransformError> {
    cfg.validate()?;
    let do_bold = rng.gen_bool(cfg.bold_prob);
    let do_pixelate = rng.gen_bool(cfg.pixelate_prob);
    let do_pad = rng.gen_bool(cfg.pad_prob);
    let mut applied = Vec::new();
    let mut current = img.clone();
    if do_bold {
        current = bold(&binarize(&current, cfg.binarize_threshold), cfg.bold_n)?;
        applied.push(AppliedTransform::Bold {
            n: cfg.bold_n,
            threshold: cfg.binarize_threshold,
        });
    }
    if do_pixelate {
        let [low, high] = cfg.pixelate_factor_range;
        let factor = if high > low {
            rng.gen_range(low..=high)
        } else {
            low
        };
        current = pixelate(&current, factor)?;
        applied.push(AppliedTransform::Pixelate { factor });
    }
    if do_pad {
        let left = rng.gen_range(0..=cfg.pad_max);
        let right = rng.gen_range(0..=cfg.pad_max);
        current = pad_sides(&current, left, right);
        applied.push(AppliedTransform::Pad { left, right });
    }
    Ok((current, applied))
}
