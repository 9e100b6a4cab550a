//! Deterministic synthetic color scenes used as test fixtures and demo inputs.

use crate::pipeline::RgbImage;

/// Left part black, columns `split..` white.
pub fn two_tone_step(rows: usize, cols: usize, split: usize) -> RgbImage {
    RgbImage::from_fn(rows, cols, |_, c| if c < split { [0; 3] } else { [255; 3] })
}

fn lerp(a: [u8; 3], b: [u8; 3], t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    let mut out = [0u8; 3];
    for k in 0..3 {
        out[k] = (a[k] as f64 + (b[k] as f64 - a[k] as f64) * t).round() as u8;
    }
    out
}

/// Simple house scene: sky, lawn, wall, roof, door, window, sun and a tree.
pub fn house(size: usize) -> RgbImage {
    let n = size as f64;
    RgbImage::from_fn(size, size, |r, c| {
        // normalized coordinates: y down, x right
        let y = (r as f64 + 0.5) / n;
        let x = (c as f64 + 0.5) / n;
        let in_rect = |y0: f64, y1: f64, x0: f64, x1: f64| y >= y0 && y < y1 && x >= x0 && x < x1;
        let in_disc = |cy: f64, cx: f64, rad: f64| (y - cy).powi(2) + (x - cx).powi(2) < rad * rad;

        if in_rect(0.62, 0.8, 0.37, 0.46) {
            return [90, 58, 32]; // door
        }
        if in_rect(0.5, 0.6, 0.51, 0.61) {
            return [238, 226, 140]; // window
        }
        if in_rect(0.42, 0.8, 0.2, 0.66) {
            return [204, 122, 84]; // wall
        }
        // roof: apex (0.2, 0.43), eaves at y = 0.42 spanning x in [0.15, 0.71]
        if (0.2..0.42).contains(&y) {
            let t = (y - 0.2) / 0.22;
            let half = 0.28 * t;
            if (x - 0.43).abs() < half {
                return [150, 40, 44];
            }
        }
        if in_disc(0.6, 0.84, 0.1) {
            return [42, 104, 46]; // canopy
        }
        if in_rect(0.68, 0.85, 0.825, 0.855) {
            return [96, 70, 40]; // trunk
        }
        if in_disc(0.14, 0.82, 0.08) {
            return [250, 214, 64]; // sun
        }
        if y < 0.72 {
            lerp([104, 154, 226], [182, 212, 244], y / 0.72)
        } else {
            lerp([86, 150, 66], [58, 112, 44], (y - 0.72) / 0.28)
        }
    })
}

/// Colored discs, a tilted square and a diagonal band on a neutral backdrop.
/// Several edges are nearly isoluminant, so they only show up in color.
pub fn shapes(size: usize) -> RgbImage {
    let n = size as f64;
    RgbImage::from_fn(size, size, |r, c| {
        let y = (r as f64 + 0.5) / n;
        let x = (c as f64 + 0.5) / n;
        let disc = |cy: f64, cx: f64, rad: f64| (y - cy).powi(2) + (x - cx).powi(2) < rad * rad;

        if disc(0.3, 0.3, 0.18) {
            return [200, 60, 60];
        }
        if disc(0.7, 0.68, 0.2) {
            return [60, 150, 200];
        }
        // square rotated by 45°, centered at (0.28, 0.74)
        if (y - 0.28).abs() + (x - 0.74).abs() < 0.16 {
            return [70, 170, 70];
        }
        let band = (x - y + 0.05).abs();
        if band < 0.06 {
            return [150, 110, 160];
        }
        if disc(0.76, 0.24, 0.12) {
            return [230, 200, 60];
        }
        [128, 120, 112]
    })
}
