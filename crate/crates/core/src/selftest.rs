//! Quick cross-checks of the fast kernels against their direct references,
//! runnable from the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gradient;
use crate::hardy::{self, HardyParams};
use crate::metrics;
use crate::plane::Plane;
use crate::qft::{self, QuaternionImage, Spectrum};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn random_quaternion_image(rows: usize, cols: usize, rng: &mut impl Rng) -> QuaternionImage {
    QuaternionImage::from_fn(rows, cols, |_, _| {
        Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    })
}

fn check(name: &'static str, worst: f64, tol: f64) -> Check {
    Check {
        name,
        passed: worst < tol,
        detail: format!("worst {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn fast_vs_direct(rng: &mut ChaCha8Rng) -> Check {
    let mut shapes: Vec<(usize, usize)> =
        (1..=8).flat_map(|r| (1..=8).map(move |c| (r, c))).collect();
    shapes.extend([(16, 16), (32, 32)]);
    let mut worst = 0.0f64;
    for (r, c) in shapes {
        let f = random_quaternion_image(r, c, rng);
        let direct = qft::dqft_direct(&f).expect("within size guard");
        worst = worst.max(qft::dqft(&f).max_abs_diff(&direct));
        let spec = Spectrum::new(r, c, random_quaternion_image(r, c, rng).into_data());
        let direct = qft::idqft_direct(&spec).expect("within size guard");
        worst = worst.max(qft::idqft(&spec).max_abs_diff(&direct));
    }
    check("dqft/idqft match direct summation", worst, 1e-9)
}

fn round_trip_and_parseval(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (mut trip, mut energy) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let f = random_quaternion_image(64, 64, rng);
        let spec = qft::dqft(&f);
        trip = trip.max(qft::idqft(&spec).max_abs_diff(&f));
        energy = energy.max((spec.energy() - f.energy()).abs() / f.energy());
    }
    vec![
        check("idqft(dqft(f)) = f", trip, 1e-10),
        check("Parseval energy balance", energy, 1e-9),
    ]
}

fn hardy_support(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for s in [0.0, 0.5, 2.0] {
        let f = random_quaternion_image(24, 20, rng);
        let out = qft::dqft(&hardy::qhf_filter(
            &f,
            &HardyParams::new(s, s).expect("valid"),
        ));
        for r in 0..24 {
            for c in 0..20 {
                let negative = qft::signed_frequency(r, 24).expect("in range") < 0.0
                    || qft::signed_frequency(c, 20).expect("in range") < 0.0;
                if negative {
                    worst = worst.max(out.get(r, c).modulus());
                }
            }
        }
    }
    check(
        "Hardy output vanishes off the positive quadrant",
        worst,
        1e-10,
    )
}

fn gradient_maximizer(rng: &mut ChaCha8Rng) -> Check {
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let g1: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let g2: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let a: f64 = g1.iter().map(|v| v * v).sum();
        let b: f64 = g2.iter().map(|v| v * v).sum();
        let c: f64 = g1.iter().zip(&g2).map(|(x, y)| x * y).sum();
        let m = gradient::gradient_magnitude(a, b, c);
        if let Some(t) = gradient::gradient_direction(a, b, c) {
            worst = worst.max((gradient::f_theta(a, b, c, t) - m).abs());
        }
    }
    check("gradient direction maximizes f(theta)", worst, 1e-9)
}

fn metric_identities(rng: &mut ChaCha8Rng) -> Check {
    let a = Plane::from_fn(32, 32, |_, _| rng.random_range(0.0..255.0));
    let b = Plane::from_fn(32, 32, |_, _| rng.random_range(0.0..255.0));
    let self_ssim = metrics::ssim(&a, &a).expect("large enough");
    let asym = (metrics::ssim(&a, &b).expect("large enough")
        - metrics::ssim(&b, &a).expect("large enough"))
    .abs();
    let inf = metrics::psnr(&a, &a, 255.0).expect("same shape") == f64::INFINITY;
    let worst = (self_ssim - 1.0).abs().max(asym);
    let mut c = check("ssim(x,x)=1, symmetric; psnr(x,x)=inf", worst, 1e-12);
    c.passed &= inf;
    c
}

/// Runs every check with a fixed seed.
pub fn run_all() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9f7a_2c11);
    let mut checks = vec![fast_vs_direct(&mut rng)];
    checks.extend(round_trip_and_parseval(&mut rng));
    checks.push(hardy_support(&mut rng));
    checks.push(gradient_maximizer(&mut rng));
    checks.push(metric_identities(&mut rng));
    checks
}
