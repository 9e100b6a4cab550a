//! One-dimensional complex FFT of arbitrary length.
//!
//! Power-of-two lengths use an iterative radix-2 decimation-in-time kernel.
//! Every other length goes through Bluestein's chirp-z algorithm, which
//! re-expresses the DFT as a circular convolution of power-of-two length.
//! Transforms are unnormalized in both directions.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Sign of the exponent: `Forward` uses `e^{-2πi nk/N}`, `Inverse` uses `e^{+2πi nk/N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

/// A precomputed transform plan for one length.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    Radix2(Radix2),
    Bluestein(Box<Bluestein>),
}

impl Fft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "FFT length must be positive");
        let kind = if len == 1 {
            Kind::Identity
        } else if len.is_power_of_two() {
            Kind::Radix2(Radix2::new(len))
        } else {
            Kind::Bluestein(Box::new(Bluestein::new(len)))
        };
        Fft { len, kind }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Transforms `buf` in place. Panics if `buf.len()` differs from the plan length.
    pub fn process(&self, buf: &mut [Complex64], direction: Direction) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        match &self.kind {
            Kind::Identity => {}
            Kind::Radix2(r) => r.process(buf, direction),
            Kind::Bluestein(b) => b.process(buf, direction),
        }
    }
}

/// `e^{-2πi k/n}` evaluated directly for each k so that twiddle error does
/// not accumulate with the index.
fn forward_twiddle(k: usize, n: usize) -> Complex64 {
    let angle = -2.0 * PI * (k as f64) / (n as f64);
    Complex64::new(angle.cos(), angle.sin())
}

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    twiddles: Vec<Complex64>,
    bit_reverse: Vec<usize>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        let bits = len.trailing_zeros();
        let twiddles = (0..len / 2).map(|k| forward_twiddle(k, len)).collect();
        let bit_reverse = (0..len)
            .map(|i| i.reverse_bits() >> (usize::BITS - bits))
            .collect();
        Radix2 {
            len,
            twiddles,
            bit_reverse,
        }
    }

    fn process(&self, buf: &mut [Complex64], direction: Direction) {
        for (i, &j) in self.bit_reverse.iter().enumerate() {
            if i < j {
                buf.swap(i, j);
            }
        }
        let inverse = direction == Direction::Inverse;
        let mut half = 1;
        while half < self.len {
            let span = half * 2;
            let stride = self.len / span;
            for block in buf.chunks_exact_mut(span) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            half = span;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    inner: Radix2,
    /// `e^{-iπ n²/N}` for n in 0..N.
    chirp: Vec<Complex64>,
    /// Forward transform of the conjugate chirp laid out for circular convolution.
    kernel_spectrum: Vec<Complex64>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let conv_len = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(conv_len);
        let modulus = 2 * len as u128;
        let chirp: Vec<Complex64> = (0..len)
            .map(|n| {
                // n² mod 2N keeps the angle argument small for large n.
                let r = ((n as u128 * n as u128) % modulus) as f64;
                let angle = -PI * r / len as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); conv_len];
        kernel[0] = chirp[0].conj();
        for n in 1..len {
            kernel[n] = chirp[n].conj();
            kernel[conv_len - n] = chirp[n].conj();
        }
        inner.process(&mut kernel, Direction::Forward);
        Bluestein {
            len,
            inner,
            chirp,
            kernel_spectrum: kernel,
        }
    }

    fn process(&self, buf: &mut [Complex64], direction: Direction) {
        // The inverse DFT is conj(forward(conj(x))).
        let inverse = direction == Direction::Inverse;
        let conv_len = self.kernel_spectrum.len();
        let mut work = vec![Complex64::new(0.0, 0.0); conv_len];
        for (w, (x, c)) in work.iter_mut().zip(buf.iter().zip(&self.chirp)) {
            let x = if inverse { x.conj() } else { *x };
            *w = x * c;
        }
        self.inner.process(&mut work, Direction::Forward);
        for (w, k) in work.iter_mut().zip(&self.kernel_spectrum) {
            *w *= k;
        }
        self.inner.process(&mut work, Direction::Inverse);
        let scale = 1.0 / conv_len as f64;
        for (out, (w, c)) in buf.iter_mut().zip(work.iter().zip(&self.chirp)) {
            let y = w * c * scale;
            *out = if inverse { y.conj() } else { y };
        }
        debug_assert_eq!(buf.len(), self.len);
    }
}

/// Transforms every row of a row-major `rows × cols` buffer along the column index.
pub fn transform_rows(
    data: &mut [Complex64],
    rows: usize,
    cols: usize,
    plan: &Fft,
    direction: Direction,
) {
    debug_assert_eq!(data.len(), rows * cols);
    debug_assert_eq!(plan.len(), cols);
    for row in data.chunks_exact_mut(cols) {
        plan.process(row, direction);
    }
}

/// Transforms every column of a row-major `rows × cols` buffer along the row index.
pub fn transform_columns(
    data: &mut [Complex64],
    rows: usize,
    cols: usize,
    plan: &Fft,
    direction: Direction,
) {
    debug_assert_eq!(data.len(), rows * cols);
    debug_assert_eq!(plan.len(), rows);
    if rows == 1 {
        return;
    }
    // Process several columns per pass so that each row read is a
    // contiguous slice rather than a single strided element.
    const BLOCK: usize = 16;
    let mut scratch = vec![Complex64::new(0.0, 0.0); rows * BLOCK];
    let mut c0 = 0;
    while c0 < cols {
        let width = BLOCK.min(cols - c0);
        for r in 0..rows {
            let src = &data[r * cols + c0..r * cols + c0 + width];
            for (b, v) in src.iter().enumerate() {
                scratch[b * rows + r] = *v;
            }
        }
        for b in 0..width {
            plan.process(&mut scratch[b * rows..(b + 1) * rows], direction);
        }
        for r in 0..rows {
            let dst = &mut data[r * cols + c0..r * cols + c0 + width];
            for (b, v) in dst.iter_mut().enumerate() {
                *v = scratch[b * rows + r];
            }
        }
        c0 += width;
    }
}
