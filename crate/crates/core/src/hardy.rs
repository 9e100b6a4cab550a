//! Quaternion Hardy filter.
//!
//! The system function is
//!
//! ```text
//! H(w1, w2; s1, s2) = (1 + sgn w1)(1 + sgn w2) · e^{-|w1| s1} · e^{-|w2| s2}
//! ```
//!
//! where `w1` is the signed angular frequency along the row axis (vertical)
//! and `w2` along the column axis (horizontal). The sign factors keep only the
//! non-negative frequency quadrant; the exponentials are a separable low-pass
//! whose strength grows with `s1` and `s2`. With `s1 = s2 = 0` the filter
//! produces the quaternion analytic signal.
//!
//! `sgn(0) = 0` here, so the DC bin passes with gain 1 and bins on a
//! zero-frequency axis pass with gain 2.

use crate::error::{Error, Result};
use crate::qft::{self, QftPlan, QuaternionImage, Spectrum};

/// Smoothing scales of the filter, in pixels. Both must be finite and `≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyParams {
    s1: f64,
    s2: f64,
}

impl HardyParams {
    /// The analytic-signal setting `s1 = s2 = 0`.
    pub const ANALYTIC: HardyParams = HardyParams { s1: 0.0, s2: 0.0 };

    pub fn new(s1: f64, s2: f64) -> Result<Self> {
        for (name, v) in [("s1", s1), ("s2", s2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(HardyParams { s1, s2 })
    }

    /// Vertical (row-axis) smoothing scale.
    pub fn s1(&self) -> f64 {
        self.s1
    }

    /// Horizontal (column-axis) smoothing scale.
    pub fn s2(&self) -> f64 {
        self.s2
    }
}

/// Odd signum with `sgn(0) = 0`.
#[inline]
fn sgn(w: f64) -> f64 {
    if w > 0.0 {
        1.0
    } else if w < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[inline]
fn axis_gain(w: f64, s: f64) -> f64 {
    let side = 1.0 + sgn(w);
    if side == 0.0 {
        0.0
    } else {
        side * (-w.abs() * s).exp()
    }
}

/// Real-valued filter gain at angular frequencies `(w1, w2)`; lies in `[0, 4]`.
pub fn hardy_response(w1: f64, w2: f64, params: &HardyParams) -> f64 {
    axis_gain(w1, params.s1) * axis_gain(w2, params.s2)
}

fn axis_gains(size: usize, s: f64) -> Vec<f64> {
    (0..size)
        .map(|idx| {
            let w = qft::signed_frequency(idx, size).expect("index within axis");
            axis_gain(w, s)
        })
        .collect()
}

/// Multiplies every coefficient by the real gain `H(w1(p), w2(s))`.
///
/// Bins with a negative signed frequency on either axis come out exactly zero.
pub fn apply_qhf(spectrum: &Spectrum, params: &HardyParams) -> Spectrum {
    let (rows, cols) = spectrum.shape();
    let row_gain = axis_gains(rows, params.s1);
    let col_gain = axis_gains(cols, params.s2);
    let mut out = spectrum.clone();
    for (r, row) in out.data_mut().chunks_exact_mut(cols).enumerate() {
        let g1 = row_gain[r];
        for (q, g2) in row.iter_mut().zip(&col_gain) {
            *q = *q * (g1 * g2);
        }
    }
    out
}

/// Output of the filter in the spatial domain: `idqft(apply_qhf(dqft(f)))`.
pub fn qhf_filter(f: &QuaternionImage, params: &HardyParams) -> QuaternionImage {
    let plan = QftPlan::new(f.rows(), f.cols());
    let spectrum = plan.forward(f);
    plan.inverse(&apply_qhf(&spectrum, params))
}

/// Quaternion analytic signal of `f`, i.e. the filter with `s1 = s2 = 0`.
pub fn analytic_signal(f: &QuaternionImage) -> QuaternionImage {
    qhf_filter(f, &HardyParams::ANALYTIC)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qft::{dqft, signed_frequency};
    use crate::quaternion::Quaternion;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_image(rows: usize, cols: usize, seed: u64) -> QuaternionImage {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        QuaternionImage::from_fn(rows, cols, |_, _| {
            Quaternion::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
    }

    fn p(s1: f64, s2: f64) -> HardyParams {
        HardyParams::new(s1, s2).unwrap()
    }

    #[test]
    fn response_examples() {
        assert_eq!(hardy_response(1.0, 1.0, &p(0.0, 0.0)), 4.0);
        for s in [0.0, 1.0, 7.5] {
            for w2 in [-2.0, 0.0, 3.0] {
                assert_eq!(hardy_response(-1.0, w2, &p(s, s)), 0.0);
            }
        }
        let v = hardy_response(1.0, 1.0, &p(1.0, 1.0));
        assert!((v - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(hardy_response(0.0, 0.0, &p(3.0, 3.0)), 1.0);
        assert_eq!(hardy_response(0.0, 0.5, &p(0.0, 0.0)), 2.0);
    }

    #[test]
    fn rejects_negative_or_nonfinite_scales() {
        assert!(HardyParams::new(-1.0, 0.0).is_err());
        assert!(HardyParams::new(0.0, -0.1).is_err());
        assert!(HardyParams::new(f64::NAN, 0.0).is_err());
        assert!(HardyParams::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn constant_spectrum_mask_4x4() {
        // signed indices on a 4-axis: 0, 1, 2(Nyquist, positive), -1
        let ones = Spectrum::new(4, 4, vec![Quaternion::ONE; 16]);
        let out = apply_qhf(&ones, &HardyParams::ANALYTIC);
        let axis = [1.0, 2.0, 2.0, 0.0];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(
                    out.get(r, c),
                    Quaternion::from_real(axis[r] * axis[c]),
                    "({r},{c})"
                );
            }
        }
        assert_eq!(out.get(0, 0).re, 1.0);
        assert_eq!(out.get(1, 1).re, 4.0);
        assert_eq!(out.get(0, 1).re, 2.0);
        assert_eq!(out.get(3, 1).re, 0.0);
    }

    #[test]
    fn zero_scale_is_the_analytic_mask() {
        let f = random_image(6, 5, 4);
        let spec = dqft(&f);
        let out = apply_qhf(&spec, &HardyParams::ANALYTIC);
        for r in 0..6 {
            for c in 0..5 {
                let w1 = signed_frequency(r, 6).unwrap();
                let w2 = signed_frequency(c, 5).unwrap();
                let h1 = (1.0 + sgn(w1)) * (1.0 + sgn(w2));
                assert_eq!(out.get(r, c), spec.get(r, c) * h1);
            }
        }
    }

    #[test]
    fn positive_quadrant_signal_is_scaled_by_four() {
        let mut spec = Spectrum::zeros(8, 8);
        spec.set(1, 2, Quaternion::new(1.0, -2.0, 0.5, 3.0));
        spec.set(3, 3, Quaternion::new(0.0, 1.0, 1.0, 1.0));
        let out = apply_qhf(&spec, &HardyParams::ANALYTIC);
        assert_eq!(out, {
            let mut s = spec.clone();
            for q in s.data_mut() {
                *q = *q * 4.0;
            }
            s
        });
    }

    #[test]
    fn zero_and_constant_images() {
        let z = QuaternionImage::zeros(5, 7);
        assert_eq!(qhf_filter(&z, &p(2.0, 2.0)).max_abs_diff(&z), 0.0);
        let c = Quaternion::pure(0.2, 0.5, 0.9);
        let konst = QuaternionImage::from_fn(9, 6, |_, _| c);
        for params in [p(0.0, 0.0), p(1.5, 1.5), p(8.0, 0.5)] {
            assert!(qhf_filter(&konst, &params).max_abs_diff(&konst) < 1e-12);
        }
    }

    #[test]
    fn output_spectrum_has_quadrant_support() {
        let f = random_image(16, 16, 12);
        let g = qhf_filter(&f, &HardyParams::ANALYTIC);
        let spec = dqft(&g);
        for r in 0..16 {
            for c in 0..16 {
                let neg = signed_frequency(r, 16).unwrap() < 0.0
                    || signed_frequency(c, 16).unwrap() < 0.0;
                if neg {
                    assert!(spec.get(r, c).max_abs_diff(Quaternion::ZERO) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn analytic_signal_is_zero_scale_filter() {
        let f = random_image(8, 8, 3);
        assert_eq!(analytic_signal(&f), qhf_filter(&f, &p(0.0, 0.0)));
    }

    proptest! {
        #[test]
        fn response_bounded_and_monotone(
            w1 in -4.0..4.0f64, w2 in -4.0..4.0f64,
            s1 in 0.0..10.0f64, s2 in 0.0..10.0f64, ds in 0.0..5.0f64,
        ) {
            let h = hardy_response(w1, w2, &p(s1, s2));
            prop_assert!((0.0..=4.0).contains(&h));
            prop_assert!(hardy_response(w1, w2, &p(s1 + ds, s2)) <= h);
            prop_assert!(hardy_response(w1, w2, &p(s1, s2 + ds)) <= h);
        }
    }
}
