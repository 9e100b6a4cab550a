//! Grayscale conversion and full-reference quality metrics.

use crate::error::{Error, Result};
use crate::pipeline::RgbImage;
use crate::plane::Plane;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
/// Dynamic range the SSIM stabilizing constants are computed for.
pub const SSIM_RANGE: f64 = 255.0;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

/// Luma `0.299 R + 0.587 G + 0.114 B`, unrounded.
pub fn grayscale(img: &RgbImage) -> Plane {
    let data = img
        .pixels()
        .iter()
        .map(|&[r, g, b]| 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
        .collect();
    Plane::new(img.rows(), img.cols(), data)
}

pub fn mse(a: &Plane, b: &Plane) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let n = a.data().len() as f64;
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n)
}

/// Peak signal-to-noise ratio in dB; `f64::INFINITY` for identical inputs.
pub fn psnr(a: &Plane, b: &Plane, peak: f64) -> Result<f64> {
    let err = mse(a, b)?;
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / err).log10())
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let half = (SSIM_WINDOW / 2) as f64;
    let mut w = [0.0; SSIM_WINDOW];
    for (i, v) in w.iter_mut().enumerate() {
        let x = i as f64 - half;
        *v = (-x * x / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w
}

/// Separable weighted mean over every full window (`valid` placement).
fn filter_valid(src: &[f64], rows: usize, cols: usize, w: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let out_cols = cols - SSIM_WINDOW + 1;
    let out_rows = rows - SSIM_WINDOW + 1;
    let mut horiz = vec![0.0; rows * out_cols];
    for r in 0..rows {
        let row = &src[r * cols..(r + 1) * cols];
        for c in 0..out_cols {
            horiz[r * out_cols + c] = row[c..c + SSIM_WINDOW]
                .iter()
                .zip(w)
                .map(|(x, k)| x * k)
                .sum();
        }
    }
    let mut out = vec![0.0; out_rows * out_cols];
    for r in 0..out_rows {
        for c in 0..out_cols {
            out[r * out_cols + c] = (0..SSIM_WINDOW)
                .map(|k| horiz[(r + k) * out_cols + c] * w[k])
                .sum();
        }
    }
    out
}

/// Mean structural similarity over 11×11 Gaussian windows (σ = 1.5) with
/// `C1 = (0.01·255)²` and `C2 = (0.03·255)²`.
pub fn ssim(a: &Plane, b: &Plane) -> Result<f64> {
    a.ensure_same_shape(b)?;
    let (rows, cols) = a.shape();
    if rows < SSIM_WINDOW || cols < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            rows,
            cols,
            min_rows: SSIM_WINDOW,
            min_cols: SSIM_WINDOW,
        });
    }
    let c1 = (SSIM_K1 * SSIM_RANGE).powi(2);
    let c2 = (SSIM_K2 * SSIM_RANGE).powi(2);
    let w = gaussian_window();
    let (x, y) = (a.data(), b.data());
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(p, q)| p * q).collect();

    let mu_x = filter_valid(x, rows, cols, &w);
    let mu_y = filter_valid(y, rows, cols, &w);
    let e_xx = filter_valid(&xx, rows, cols, &w);
    let e_yy = filter_valid(&yy, rows, cols, &w);
    let e_xy = filter_valid(&xy, rows, cols, &w);

    let n = mu_x.len();
    let mut total = 0.0;
    for i in 0..n {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = e_xx[i] - mx * mx;
        let var_y = e_yy[i] - my * my;
        let cov = e_xy[i] - mx * my;
        // symmetric in (x, y) term by term
        let num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        let den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
        total += num / den;
    }
    Ok(total / n as f64)
}
