//! Improved Di Zenzo color gradient.
//!
//! Coordinates follow the filter convention: `x1` runs down the rows and
//! `x2` runs across the columns. A direction `θ` is measured from the `x1`
//! axis, so the unit step is `(cos θ, sin θ)` in `(row, col)` order.
//!
//! For channel derivatives `∂h_k/∂x1`, `∂h_k/∂x2` the structure tensor is
//!
//! ```text
//! e11 = Σ_k (∂h_k/∂x1)²,   e22 = Σ_k (∂h_k/∂x2)²,   e12 = Σ_k (∂h_k/∂x1)(∂h_k/∂x2)
//! ```
//!
//! and the squared directional variation is
//! `f(θ) = e11·cos²θ + e22·sin²θ + 2·e12·cosθ·sinθ`. The gradient magnitude is
//! `max_θ f(θ)`, the larger eigenvalue of `[[e11, e12], [e12, e22]]`.

use crate::error::{Error, Result};
use crate::plane::Plane;

/// Smallest plane accepted by the derivative stencil.
pub const MIN_SIZE: usize = 3;

/// Three equally sized real planes, one per vector component.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTriple {
    planes: [Plane; 3],
}

impl ChannelTriple {
    pub fn new(h1: Plane, h2: Plane, h3: Plane) -> Result<Self> {
        h1.ensure_same_shape(&h2)?;
        h1.ensure_same_shape(&h3)?;
        Ok(ChannelTriple {
            planes: [h1, h2, h3],
        })
    }

    pub fn planes(&self) -> &[Plane; 3] {
        &self.planes
    }

    pub fn shape(&self) -> (usize, usize) {
        self.planes[0].shape()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensorField {
    pub e11: Plane,
    pub e22: Plane,
    pub e12: Plane,
}

/// Per-pixel gradient magnitude and direction; `None` where the direction
/// is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub magnitude: Plane,
    pub direction: Vec<Option<f64>>,
}

impl GradientField {
    pub fn shape(&self) -> (usize, usize) {
        self.magnitude.shape()
    }
}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    if rows < MIN_SIZE || cols < MIN_SIZE {
        return Err(Error::ImageTooSmall {
            rows,
            cols,
            min_rows: MIN_SIZE,
            min_cols: MIN_SIZE,
        });
    }
    Ok(())
}

/// Sobel-style derivatives `(∂/∂x1, ∂/∂x2)` normalized to unit gain on a
/// unit ramp, with replicated borders.
pub fn partial_derivatives(plane: &Plane) -> Result<(Plane, Plane)> {
    let (rows, cols) = plane.shape();
    check_size(rows, cols)?;
    let mut d1 = Plane::zeros(rows, cols);
    let mut d2 = Plane::zeros(rows, cols);
    for r in 0..rows {
        let up = r.saturating_sub(1);
        let down = (r + 1).min(rows - 1);
        for c in 0..cols {
            let left = c.saturating_sub(1);
            let right = (c + 1).min(cols - 1);
            let at = |rr: usize, cc: usize| plane.get(rr, cc);
            let v1 = (at(down, left) + 2.0 * at(down, c) + at(down, right))
                - (at(up, left) + 2.0 * at(up, c) + at(up, right));
            let v2 = (at(up, right) + 2.0 * at(r, right) + at(down, right))
                - (at(up, left) + 2.0 * at(r, left) + at(down, left));
            d1.set(r, c, v1 / 8.0);
            d2.set(r, c, v2 / 8.0);
        }
    }
    Ok((d1, d2))
}

pub fn structure_tensor(channels: &ChannelTriple) -> Result<StructureTensorField> {
    let (rows, cols) = channels.shape();
    check_size(rows, cols)?;
    let mut e11 = Plane::zeros(rows, cols);
    let mut e22 = Plane::zeros(rows, cols);
    let mut e12 = Plane::zeros(rows, cols);
    for plane in channels.planes() {
        let (d1, d2) = partial_derivatives(plane)?;
        for idx in 0..rows * cols {
            let (a, b) = (d1.data()[idx], d2.data()[idx]);
            e11.data_mut()[idx] += a * a;
            e22.data_mut()[idx] += b * b;
            e12.data_mut()[idx] += a * b;
        }
    }
    Ok(StructureTensorField { e11, e22, e12 })
}

/// Squared variation along direction `theta`.
pub fn f_theta(e11: f64, e22: f64, e12: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    e11 * c * c + e22 * s * s + 2.0 * e12 * c * s
}

/// Larger eigenvalue of the 2×2 tensor, `max_θ f(θ)`.
pub fn gradient_magnitude(e11: f64, e22: f64, e12: f64) -> f64 {
    let diff = e11 - e22;
    0.5 * (e11 + e22 + (diff * diff + 4.0 * e12 * e12).sqrt())
}

/// Maximizer of `f(θ)` folded into `(−π/2, π/2]`, or `None` when the tensor
/// is isotropic (`(e11 − e22)² + e12² = 0`).
pub fn gradient_direction(e11: f64, e22: f64, e12: f64) -> Option<f64> {
    let diff = e11 - e22;
    if diff * diff + e12 * e12 == 0.0 {
        return None;
    }
    // atan2 lands in (−π, π], so half of it is already in (−π/2, π/2].
    Some(0.5 * (2.0 * e12).atan2(diff))
}

pub fn gradient_field(tensor: &StructureTensorField) -> GradientField {
    let (rows, cols) = tensor.e11.shape();
    let n = rows * cols;
    let mut magnitude = Plane::zeros(rows, cols);
    let mut direction = Vec::with_capacity(n);
    for idx in 0..n {
        let (a, b, c) = (
            tensor.e11.data()[idx],
            tensor.e22.data()[idx],
            tensor.e12.data()[idx],
        );
        magnitude.data_mut()[idx] = gradient_magnitude(a, b, c);
        direction.push(gradient_direction(a, b, c));
    }
    GradientField {
        magnitude,
        direction,
    }
}

/// Structure tensor followed by per-pixel magnitude and direction.
pub fn color_gradient(channels: &ChannelTriple) -> Result<GradientField> {
    Ok(gradient_field(&structure_tensor(channels)?))
}
