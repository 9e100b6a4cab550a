//! Two-sided discrete quaternion Fourier transform.
//!
//! For an `M × N` array `f(m, n)` (M rows, N columns) the forward transform is
//!
//! ```text
//! F(p, s) = 1/√(MN) Σ_m Σ_n  e^{-i2πmp/M} · f(m, n) · e^{-j2πns/N}
//! ```
//!
//! with the `i`-exponential on the left (row axis) and the `j`-exponential on
//! the right (column axis). The inverse flips both signs and keeps the same
//! `1/√(MN)` factor.
//!
//! The fast path writes `f = A + B·j` with `A = re + i·i` and `B = j + k·i`,
//! both `i`-complex. Right multiplication by `e^{∓jβ}` then mixes `A` and `B`
//! so that `A + iB` sees `e^{∓iβ}` and `A − iB` sees `e^{±iβ}`: the whole
//! transform becomes two 2D complex FFTs that differ only in the column sign.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{self, Direction, Fft};
use crate::quaternion::Quaternion;

/// Largest `rows·cols` accepted by [`dqft_direct`] and [`idqft_direct`].
pub const DIRECT_SIZE_LIMIT: usize = 4096;

macro_rules! quaternion_grid {
    ($name:ident) => {
        impl $name {
            /// Panics if `data.len() != rows * cols` or either dimension is zero.
            pub fn new(rows: usize, cols: usize, data: Vec<Quaternion>) -> Self {
                assert!(rows > 0 && cols > 0, "grid dimensions must be positive");
                assert_eq!(data.len(), rows * cols, "grid data length mismatch");
                $name { rows, cols, data }
            }

            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self::new(rows, cols, vec![Quaternion::ZERO; rows * cols])
            }

            pub fn from_fn(
                rows: usize,
                cols: usize,
                mut f: impl FnMut(usize, usize) -> Quaternion,
            ) -> Self {
                let mut data = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        data.push(f(r, c));
                    }
                }
                Self::new(rows, cols, data)
            }

            pub fn rows(&self) -> usize {
                self.rows
            }

            pub fn cols(&self) -> usize {
                self.cols
            }

            pub fn shape(&self) -> (usize, usize) {
                (self.rows, self.cols)
            }

            pub fn data(&self) -> &[Quaternion] {
                &self.data
            }

            pub fn data_mut(&mut self) -> &mut [Quaternion] {
                &mut self.data
            }

            pub fn into_data(self) -> Vec<Quaternion> {
                self.data
            }

            #[inline]
            pub fn get(&self, row: usize, col: usize) -> Quaternion {
                self.data[row * self.cols + col]
            }

            #[inline]
            pub fn set(&mut self, row: usize, col: usize, q: Quaternion) {
                self.data[row * self.cols + col] = q;
            }

            /// `Σ |q|²` over all entries.
            pub fn energy(&self) -> f64 {
                self.data.iter().map(|q| q.norm_sqr()).sum()
            }

            /// Largest componentwise difference; `∞` if shapes differ.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                if self.shape() != other.shape() {
                    return f64::INFINITY;
                }
                self.data
                    .iter()
                    .zip(&other.data)
                    .map(|(a, b)| a.max_abs_diff(*b))
                    .fold(0.0, f64::max)
            }
        }
    };
}

/// Spatial-domain quaternion array, row-major, `rows × cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionImage {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

/// DQFT coefficients; entry `(p, s)` pairs row frequency index `p` with
/// column frequency index `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

quaternion_grid!(QuaternionImage);
quaternion_grid!(Spectrum);

/// Reusable FFT plans for one image shape.
#[derive(Debug, Clone)]
pub struct QftPlan {
    rows: usize,
    cols: usize,
    row_axis: Fft,
    col_axis: Fft,
}

impl QftPlan {
    pub fn new(rows: usize, cols: usize) -> Self {
        QftPlan {
            rows,
            cols,
            row_axis: Fft::new(rows),
            col_axis: Fft::new(cols),
        }
    }

    pub fn forward(&self, f: &QuaternionImage) -> Spectrum {
        assert_eq!(f.shape(), (self.rows, self.cols), "plan shape mismatch");
        let data = self.run(&f.data, Direction::Forward);
        Spectrum::new(self.rows, self.cols, data)
    }

    pub fn inverse(&self, spectrum: &Spectrum) -> QuaternionImage {
        assert_eq!(
            spectrum.shape(),
            (self.rows, self.cols),
            "plan shape mismatch"
        );
        let data = self.run(&spectrum.data, Direction::Inverse);
        QuaternionImage::new(self.rows, self.cols, data)
    }

    fn run(&self, input: &[Quaternion], direction: Direction) -> Vec<Quaternion> {
        let (rows, cols) = (self.rows, self.cols);
        let i = Complex64::i();
        let mut u = Vec::with_capacity(input.len());
        let mut v = Vec::with_capacity(input.len());
        for q in input {
            let a = Complex64::new(q.re, q.i);
            let b = Complex64::new(q.j, q.k);
            u.push(a + i * b);
            v.push(a - i * b);
        }
        fft::transform_rows(&mut u, rows, cols, &self.col_axis, direction);
        fft::transform_rows(&mut v, rows, cols, &self.col_axis, direction.flip());
        fft::transform_columns(&mut u, rows, cols, &self.row_axis, direction);
        fft::transform_columns(&mut v, rows, cols, &self.row_axis, direction);

        let scale = 1.0 / ((rows * cols) as f64).sqrt();
        u.iter()
            .zip(&v)
            .map(|(u, v)| {
                let x = (u + v) * (0.5 * scale);
                // (u − v) / 2i
                let d = u - v;
                let y = Complex64::new(d.im, -d.re) * (0.5 * scale);
                Quaternion::new(x.re, x.im, y.re, y.im)
            })
            .collect()
    }
}

/// Forward two-sided DQFT in `O(MN·(log M + log N))`.
pub fn dqft(f: &QuaternionImage) -> Spectrum {
    QftPlan::new(f.rows, f.cols).forward(f)
}

/// Inverse two-sided DQFT; `idqft(&dqft(&f))` reproduces `f`.
pub fn idqft(spectrum: &Spectrum) -> QuaternionImage {
    QftPlan::new(spectrum.rows, spectrum.cols).inverse(spectrum)
}

fn check_direct_size(rows: usize, cols: usize) -> Result<()> {
    if rows * cols > DIRECT_SIZE_LIMIT {
        return Err(Error::OracleSize {
            rows,
            cols,
            limit: DIRECT_SIZE_LIMIT,
        });
    }
    Ok(())
}

/// `e^{sign·i·2π·(num mod den)/den}` as a quaternion in the `1, i` plane.
fn exp_i(sign: f64, num: usize, den: usize) -> Quaternion {
    let angle = sign * 2.0 * PI * ((num % den) as f64) / den as f64;
    Quaternion::new(angle.cos(), angle.sin(), 0.0, 0.0)
}

/// `e^{sign·j·2π·(num mod den)/den}` as a quaternion in the `1, j` plane.
fn exp_j(sign: f64, num: usize, den: usize) -> Quaternion {
    let angle = sign * 2.0 * PI * ((num % den) as f64) / den as f64;
    Quaternion::new(angle.cos(), 0.0, angle.sin(), 0.0)
}

fn direct(rows: usize, cols: usize, input: &[Quaternion], sign: f64) -> Vec<Quaternion> {
    let scale = 1.0 / ((rows * cols) as f64).sqrt();
    let mut out = Vec::with_capacity(rows * cols);
    for p in 0..rows {
        for s in 0..cols {
            let mut acc = Quaternion::ZERO;
            for m in 0..rows {
                let left = exp_i(sign, m * p, rows);
                for n in 0..cols {
                    let right = exp_j(sign, n * s, cols);
                    acc += left * input[m * cols + n] * right;
                }
            }
            out.push(acc * scale);
        }
    }
    out
}

/// Literal quadruple-loop evaluation of the forward DQFT.
///
/// Used as the reference for [`dqft`]; rejects inputs with more than
/// [`DIRECT_SIZE_LIMIT`] samples.
pub fn dqft_direct(f: &QuaternionImage) -> Result<Spectrum> {
    check_direct_size(f.rows, f.cols)?;
    Ok(Spectrum::new(
        f.rows,
        f.cols,
        direct(f.rows, f.cols, &f.data, -1.0),
    ))
}

/// Literal quadruple-loop evaluation of the inverse DQFT.
pub fn idqft_direct(spectrum: &Spectrum) -> Result<QuaternionImage> {
    check_direct_size(spectrum.rows, spectrum.cols)?;
    Ok(QuaternionImage::new(
        spectrum.rows,
        spectrum.cols,
        direct(spectrum.rows, spectrum.cols, &spectrum.data, 1.0),
    ))
}

/// Signed bin number: `index` for `index ≤ size/2`, otherwise `index − size`.
///
/// On even axes the Nyquist bin `size/2` is counted as positive.
pub fn signed_index(index: usize, size: usize) -> Result<i64> {
    if index >= size {
        return Err(Error::IndexOutOfRange { index, size });
    }
    Ok(if index <= size / 2 {
        index as i64
    } else {
        index as i64 - size as i64
    })
}

/// Angular frequency `2πk/size` (radians per sample) of DQFT bin `index`,
/// with `k` from [`signed_index`].
pub fn signed_frequency(index: usize, size: usize) -> Result<f64> {
    let k = signed_index(index, size)?;
    Ok(2.0 * PI * k as f64 / size as f64)
}
