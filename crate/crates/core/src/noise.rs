//! Synthetic noise models for robustness experiments.
//!
//! All models work on intensities scaled to `[0, 1]`, clamp the result back
//! into `[0, 1]` and re-quantize to 8 bits. Randomness comes from ChaCha20
//! (`rand_chacha::ChaCha20Rng`) seeded with a 64-bit value, so a fixed seed
//! reproduces the same image bit for bit.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal, Poisson};

use crate::error::{Error, Result};
use crate::pipeline::RgbImage;

pub const DEFAULT_GAUSSIAN_VARIANCE: f64 = 0.01;
pub const DEFAULT_SPECKLE_VARIANCE: f64 = 0.05;
pub const DEFAULT_SALT_PEPPER_DENSITY: f64 = 0.05;
pub const DEFAULT_POISSON_PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Additive `N(0, variance)` per channel.
    Gaussian { variance: f64 },
    /// `Poisson(x·peak) / peak` per channel.
    Poisson { peak: f64 },
    /// A `density` fraction of pixels forced to black or white.
    SaltPepper { density: f64 },
    /// Multiplicative `x + n·x` with `n ~ N(0, variance)`.
    Speckle { variance: f64 },
}

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian { .. } => "gaussian",
            NoiseKind::Poisson { .. } => "poisson",
            NoiseKind::SaltPepper { .. } => "salt_pepper",
            NoiseKind::Speckle { .. } => "speckle",
        }
    }

    /// The four models at their default strengths.
    pub fn defaults() -> [NoiseKind; 4] {
        [
            NoiseKind::Gaussian {
                variance: DEFAULT_GAUSSIAN_VARIANCE,
            },
            NoiseKind::Poisson {
                peak: DEFAULT_POISSON_PEAK,
            },
            NoiseKind::SaltPepper {
                density: DEFAULT_SALT_PEPPER_DENSITY,
            },
            NoiseKind::Speckle {
                variance: DEFAULT_SPECKLE_VARIANCE,
            },
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |name, v: f64, cond: bool, want: &str| {
            if v.is_finite() && cond {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be {want}, got {v}")))
            }
        };
        match *self {
            NoiseKind::Gaussian { variance } | NoiseKind::Speckle { variance } => {
                ok("variance", variance, variance >= 0.0, ">= 0")
            }
            NoiseKind::Poisson { peak } => ok("peak", peak, peak > 0.0, "> 0"),
            NoiseKind::SaltPepper { density } => ok(
                "density",
                density,
                (0.0..=1.0).contains(&density),
                "in [0, 1]",
            ),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseKind::Gaussian { variance } => write!(f, "gaussian:variance={variance}"),
            NoiseKind::Poisson { peak } => write!(f, "poisson:peak={peak}"),
            NoiseKind::SaltPepper { density } => write!(f, "salt_pepper:density={density}"),
            NoiseKind::Speckle { variance } => write!(f, "speckle:variance={variance}"),
        }
    }
}

/// Parses `kind[:param=value]`, e.g. `gaussian`, `salt_pepper:density=0.1`,
/// `poisson:peak=100`. Omitted parameters take their defaults.
impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidNoiseSpec {
            spec: s.to_string(),
            reason,
        };
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r)),
            None => (s.trim(), None),
        };
        let mut parsed = match kind {
            "gaussian" => NoiseKind::Gaussian {
                variance: DEFAULT_GAUSSIAN_VARIANCE,
            },
            "poisson" => NoiseKind::Poisson {
                peak: DEFAULT_POISSON_PEAK,
            },
            "salt_pepper" | "salt-pepper" | "saltpepper" => NoiseKind::SaltPepper {
                density: DEFAULT_SALT_PEPPER_DENSITY,
            },
            "speckle" => NoiseKind::Speckle {
                variance: DEFAULT_SPECKLE_VARIANCE,
            },
            other => return Err(bad(format!("unknown noise kind `{other}`"))),
        };
        if let Some(rest) = rest {
            for assignment in rest.split(',').filter(|a| !a.trim().is_empty()) {
                let (key, value) = assignment
                    .split_once('=')
                    .ok_or_else(|| bad(format!("expected param=value, got `{assignment}`")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not a number")))?;
                let slot = match (&mut parsed, key.trim()) {
                    (NoiseKind::Gaussian { variance }, "variance")
                    | (NoiseKind::Speckle { variance }, "variance") => variance,
                    (NoiseKind::Poisson { peak }, "peak") => peak,
                    (NoiseKind::SaltPepper { density }, "density") => density,
                    (_, key) => return Err(bad(format!("`{key}` is not a parameter of {kind}"))),
                };
                *slot = value;
            }
        }
        parsed.validate().map_err(|e| bad(e.to_string()))?;
        Ok(parsed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Self {
        NoiseSpec { kind, seed }
    }
}

#[inline]
fn quantize(x: f64) -> u8 {
    (x.clamp(0.0, 1.0) * 255.0).round() as u8
}

#[inline]
fn unit(v: u8) -> f64 {
    v as f64 / 255.0
}

pub fn add_noise(img: &RgbImage, spec: &NoiseSpec) -> Result<RgbImage> {
    spec.kind.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut out = img.clone();
    match spec.kind {
        NoiseKind::Gaussian { variance } => {
            if variance > 0.0 {
                let normal = Normal::new(0.0, variance.sqrt()).expect("valid std dev");
                for px in out.pixels_mut() {
                    for c in px.iter_mut() {
                        *c = quantize(unit(*c) + normal.sample(&mut rng));
                    }
                }
            }
        }
        NoiseKind::Speckle { variance } => {
            if variance > 0.0 {
                let normal = Normal::new(0.0, variance.sqrt()).expect("valid std dev");
                for px in out.pixels_mut() {
                    for c in px.iter_mut() {
                        let x = unit(*c);
                        *c = quantize(x + normal.sample(&mut rng) * x);
                    }
                }
            }
        }
        NoiseKind::Poisson { peak } => {
            for px in out.pixels_mut() {
                for c in px.iter_mut() {
                    let lambda = unit(*c) * peak;
                    let count = if lambda > 0.0 {
                        Poisson::new(lambda)
                            .expect("positive rate")
                            .sample(&mut rng)
                    } else {
                        0.0
                    };
                    *c = quantize(count / peak);
                }
            }
        }
        NoiseKind::SaltPepper { density } => {
            for px in out.pixels_mut() {
                if rng.random::<f64>() < density {
                    *px = if rng.random::<bool>() {
                        [255; 3]
                    } else {
                        [0; 3]
                    };
                }
            }
        }
    }
    Ok(out)
}

/// Seed for one (image, noise kind) cell of an experiment, so that cells are
/// independent of each other and of evaluation order.
pub fn derive_seed(seed: u64, image_id: &str, kind: &NoiseKind) -> u64 {
    // FNV-1a over the labels, then a SplitMix64 finalizer.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in image_id
        .bytes()
        .chain(std::iter::once(0xff))
        .chain(kind.name().bytes())
    {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn textured(rows: usize, cols: usize) -> RgbImage {
        // stays within 1..=254 so salt/pepper always changes a pixel
        RgbImage::from_fn(rows, cols, |r, c| {
            [
                (1 + (r * 7 + c * 3) % 254) as u8,
                (1 + (r * 5 + c * 11) % 254) as u8,
                (1 + (r + c) % 254) as u8,
            ]
        })
    }

    #[test]
    fn zero_strength_leaves_image_unchanged() {
        let img = textured(20, 30);
        for kind in [
            NoiseKind::SaltPepper { density: 0.0 },
            NoiseKind::Gaussian { variance: 0.0 },
            NoiseKind::Speckle { variance: 0.0 },
        ] {
            assert_eq!(
                add_noise(&img, &NoiseSpec::new(kind, 5)).unwrap(),
                img,
                "{kind}"
            );
        }
    }

    #[test]
    fn salt_pepper_fraction_concentrates() {
        let img = textured(256, 256);
        let spec = NoiseSpec::new(NoiseKind::SaltPepper { density: 0.05 }, 17);
        let noisy = add_noise(&img, &spec).unwrap();
        let changed = img
            .pixels()
            .iter()
            .zip(noisy.pixels())
            .filter(|(a, b)| a != b)
            .count();
        let frac = changed as f64 / (256.0 * 256.0);
        assert!((frac - 0.05).abs() <= 0.01, "fraction {frac}");
        assert!(noisy
            .pixels()
            .iter()
            .zip(img.pixels())
            .filter(|(a, b)| a != b)
            .all(|(p, _)| *p == [0; 3] || *p == [255; 3]));
    }

    #[test]
    fn fixed_seed_is_reproducible_and_seed_matters() {
        let img = textured(32, 32);
        for kind in NoiseKind::defaults() {
            let a = add_noise(&img, &NoiseSpec::new(kind, 1)).unwrap();
            let b = add_noise(&img, &NoiseSpec::new(kind, 1)).unwrap();
            let c = add_noise(&img, &NoiseSpec::new(kind, 2)).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c, "{kind}");
        }
    }

    #[test]
    fn poisson_keeps_black_black() {
        let img = RgbImage::filled(8, 8, [0, 0, 0]);
        let spec = NoiseSpec::new(NoiseKind::Poisson { peak: 255.0 }, 3);
        assert_eq!(add_noise(&img, &spec).unwrap(), img);
    }

    #[test]
    fn gaussian_noise_is_roughly_zero_mean_with_requested_spread() {
        let img = RgbImage::filled(128, 128, [128, 128, 128]);
        let noisy = add_noise(
            &img,
            &NoiseSpec::new(NoiseKind::Gaussian { variance: 0.01 }, 9),
        )
        .unwrap();
        let diffs: Vec<f64> = noisy
            .pixels()
            .iter()
            .flat_map(|p| p.iter().map(|&v| v as f64 / 255.0 - 128.0 / 255.0))
            .collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 0.005);
        assert!((var - 0.01).abs() < 0.001, "variance {var}");
    }

    #[test]
    fn parses_specs() {
        assert_eq!(
            "gaussian".parse::<NoiseKind>().unwrap(),
            NoiseKind::Gaussian { variance: 0.01 }
        );
        assert_eq!(
            "salt_pepper:density=0.2".parse::<NoiseKind>().unwrap(),
            NoiseKind::SaltPepper { density: 0.2 }
        );
        assert_eq!(
            "poisson:peak=100".parse::<NoiseKind>().unwrap(),
            NoiseKind::Poisson { peak: 100.0 }
        );
        for kind in NoiseKind::defaults() {
            assert_eq!(kind.to_string().parse::<NoiseKind>().unwrap(), kind);
        }
        for bad in [
            "pink",
            "gaussian:density=0.1",
            "salt_pepper:density=1.5",
            "gaussian:variance=-1",
            "poisson:peak=0",
            "speckle:variance",
            "gaussian:variance=abc",
        ] {
            assert!(bad.parse::<NoiseKind>().is_err(), "{bad}");
        }
    }

    #[test]
    fn invalid_spec_is_rejected_by_add_noise() {
        let img = textured(4, 4);
        let spec = NoiseSpec::new(NoiseKind::SaltPepper { density: 2.0 }, 0);
        assert!(matches!(
            add_noise(&img, &spec),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn derived_seeds_separate_cells() {
        let g = NoiseKind::defaults()[0];
        let sp = NoiseKind::defaults()[2];
        let a = derive_seed(1, "house", &g);
        assert_eq!(a, derive_seed(1, "house", &g));
        assert_ne!(a, derive_seed(2, "house", &g));
        assert_ne!(a, derive_seed(1, "lena", &g));
        assert_ne!(a, derive_seed(1, "house", &sp));
    }
}
