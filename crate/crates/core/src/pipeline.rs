//! End-to-end color edge detection.
//!
//! RGB pixels become pure quaternions `r·i + g·j + b·k`, are filtered in the
//! DQFT domain, and the vector part of the result feeds the color gradient.
//! By default the filter runs on a mirrored copy of the image, so the
//! transform's periodic wrap does not put edges on the borders.
//! Nonmaximum suppression thins the magnitude field and a single global
//! threshold (a fraction of the largest surviving magnitude) binarizes it.

use crate::error::{Error, Result};
use crate::gradient::{self, ChannelTriple, GradientField};
use crate::hardy::{self, HardyParams};
use crate::plane::Plane;
use crate::qft::QuaternionImage;
use crate::quaternion::Quaternion;

/// Magnitudes at or below this are treated as numerically flat. Spectral
/// round trips leave ~1e-16 residue on constant regions, whose squared
/// gradients (~1e-32) must not survive a relative threshold.
pub const MAGNITUDE_FLOOR: f64 = 1e-12;

/// 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    rows: usize,
    cols: usize,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(rows: usize, cols: usize, data: Vec<[u8; 3]>) -> Self {
        assert_eq!(data.len(), rows * cols, "image data length mismatch");
        RgbImage { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, rgb: [u8; 3]) -> Self {
        RgbImage::new(rows, cols, vec![rgb; rows * cols])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RgbImage::new(rows, cols, data)
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

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [[u8; 3]] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> [u8; 3] {
        self.data[row * self.cols + col]
    }

    /// Reorders channels: output channel `c` takes input channel `order[c]`.
    pub fn permute_channels(&self, order: [usize; 3]) -> RgbImage {
        let data = self
            .data
            .iter()
            .map(|p| [p[order[0]], p[order[1]], p[order[2]]])
            .collect();
        RgbImage::new(self.rows, self.cols, data)
    }
}

/// Binary edge map; `true` marks an edge pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl EdgeMap {
    pub fn new(rows: usize, cols: usize, data: Vec<bool>) -> Self {
        assert_eq!(data.len(), rows * cols, "edge map length mismatch");
        EdgeMap { rows, cols, data }
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

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.cols + col]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&e| e).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// `true` if every edge of `self` is also an edge of `other`.
    pub fn is_subset_of(&self, other: &EdgeMap) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    /// Edges as 255, background as 0.
    pub fn to_plane(&self) -> Plane {
        Plane::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .map(|&e| if e { 255.0 } else { 0.0 })
                .collect(),
        )
    }
}

/// How the image is extended before the spectral filter sees it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Boundary {
    /// Filter the image as is. The DQFT then treats it as one period of a
    /// periodic signal, and any mismatch between opposite borders shows up
    /// as spurious edges along them.
    Periodic,
    /// Filter the half-sample mirror extension to `2M × 2N` and crop back.
    /// The extension is continuous across every border.
    #[default]
    Symmetric,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "symmetric" => Ok(Boundary::Symmetric),
            other => Err(Error::invalid(
                "boundary",
                format!("unknown boundary `{other}` (expected periodic or symmetric)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectParams {
    pub hardy: HardyParams,
    threshold_fraction: f64,
    pub normalize: bool,
    pub boundary: Boundary,
}

impl DetectParams {
    pub const DEFAULT_THRESHOLD: f64 = 0.1;
    /// Default smoothing for clean inputs.
    pub const CLEAN_SCALE: f64 = 1.5;
    /// Default smoothing for noisy inputs.
    pub const NOISY_SCALE: f64 = 4.0;

    pub fn new(hardy: HardyParams, threshold_fraction: f64, normalize: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&threshold_fraction) {
            return Err(Error::invalid(
                "threshold",
                format!("must lie in [0, 1], got {threshold_fraction}"),
            ));
        }
        Ok(DetectParams {
            hardy,
            threshold_fraction,
            normalize,
            boundary: Boundary::default(),
        })
    }

    /// `s1 = s2 = scale`, default threshold, normalized intensities.
    pub fn with_scale(scale: f64) -> Result<Self> {
        DetectParams::new(
            HardyParams::new(scale, scale)?,
            Self::DEFAULT_THRESHOLD,
            true,
        )
    }

    pub fn threshold_fraction(&self) -> f64 {
        self.threshold_fraction
    }

    pub fn with_threshold(self, threshold_fraction: f64) -> Result<Self> {
        Ok(DetectParams {
            boundary: self.boundary,
            ..DetectParams::new(self.hardy, threshold_fraction, self.normalize)?
        })
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        DetectParams { boundary, ..self }
    }
}

impl Default for DetectParams {
    fn default() -> Self {
        DetectParams::with_scale(Self::CLEAN_SCALE).expect("default parameters are valid")
    }
}

/// What runs between the quaternion encoding and the gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterStage {
    /// Quaternion Hardy filter with the given scales.
    Hardy(HardyParams),
    /// Quaternion analytic signal.
    AnalyticSignal,
    /// No filtering: the gradient sees the raw channels.
    Bypass,
}

/// The detectors that the evaluation harness knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    /// Hardy-filtered pipeline.
    Qhf,
    /// Same pipeline with the filter bypassed.
    IdzRaw,
}

impl Detector {
    pub fn name(self) -> &'static str {
        match self {
            Detector::Qhf => "qhf",
            Detector::IdzRaw => "idz_raw",
        }
    }

    pub fn stage(self, params: &DetectParams) -> FilterStage {
        match self {
            Detector::Qhf => FilterStage::Hardy(params.hardy),
            Detector::IdzRaw => FilterStage::Bypass,
        }
    }

    pub fn detect(self, img: &RgbImage, params: &DetectParams) -> Result<EdgeMap> {
        detect_edges_with(img, params, self.stage(params))
    }
}

impl std::str::FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qhf" => Ok(Detector::Qhf),
            "idz_raw" | "idz-raw" => Ok(Detector::IdzRaw),
            other => Err(Error::invalid(
                "detector",
                format!("unknown detector `{other}` (expected qhf or idz_raw)"),
            )),
        }
    }
}

impl std::fmt::Display for Detector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Encodes each pixel as the pure quaternion `r·i + g·j + b·k`, scaled to
/// `[0, 1]` when `normalize` is set.
pub fn rgb_to_quaternion(img: &RgbImage, normalize: bool) -> QuaternionImage {
    let scale = if normalize { 1.0 / 255.0 } else { 1.0 };
    let data = img
        .pixels()
        .iter()
        .map(|&[r, g, b]| Quaternion::pure(r as f64 * scale, g as f64 * scale, b as f64 * scale))
        .collect();
    QuaternionImage::new(img.rows(), img.cols(), data)
}

/// Splits the vector part into its `i`, `j`, `k` coefficient planes. The
/// scalar part is discarded.
pub fn vector_channels(f: &QuaternionImage) -> ChannelTriple {
    let (rows, cols) = f.shape();
    let mut planes = [
        Plane::zeros(rows, cols),
        Plane::zeros(rows, cols),
        Plane::zeros(rows, cols),
    ];
    for (idx, q) in f.data().iter().enumerate() {
        for (plane, v) in planes.iter_mut().zip(q.imag()) {
            plane.data_mut()[idx] = v;
        }
    }
    let [h1, h2, h3] = planes;
    ChannelTriple::new(h1, h2, h3).expect("planes share one shape")
}

/// Quantized gradient direction as a `(drow, dcol)` neighbor offset.
fn quantized_offset(theta: f64) -> (isize, isize) {
    // fold into [0°, 180°)
    let mut deg = theta.to_degrees();
    if deg < 0.0 {
        deg += 180.0;
    }
    if !(22.5..157.5).contains(&deg) {
        (1, 0)
    } else if deg < 67.5 {
        (1, 1)
    } else if deg < 112.5 {
        (0, 1)
    } else {
        (1, -1)
    }
}

/// Relative gap below which two magnitudes count as tied. Spectral filtering
/// leaves ~1e-16 jitter between pixels that are equal in exact arithmetic.
pub const TIE_RTOL: f64 = 1e-9;

/// Thins the magnitude field along the gradient direction quantized to 0°,
/// 45°, 90° or 135°. A pixel survives if it is at least its forward neighbor
/// and strictly above its backward neighbor, so a tied pair across a ridge
/// keeps exactly its first pixel instead of both or neither. Out-of-bounds
/// neighbors never suppress. Pixels with an undefined direction keep their
/// magnitude.
pub fn nonmax_suppress(magnitude: &Plane, direction: &[Option<f64>]) -> Result<Plane> {
    let (rows, cols) = magnitude.shape();
    if direction.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: (rows, cols),
            found: (direction.len(), 1),
        });
    }
    let neighbor = |r: usize, c: usize, dr: isize, dc: isize| {
        let (nr, nc) = (r as isize + dr, c as isize + dc);
        if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
            None
        } else {
            Some(magnitude.get(nr as usize, nc as usize))
        }
    };
    let tol = |a: f64, b: f64| TIE_RTOL * a.abs().max(b.abs());
    let mut out = Plane::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let idx = r * cols + c;
            let m = magnitude.data()[idx];
            let keep = match direction[idx] {
                None => true,
                Some(theta) => {
                    let (dr, dc) = quantized_offset(theta);
                    let ahead = neighbor(r, c, dr, dc).is_none_or(|n| m >= n - tol(m, n));
                    let behind = neighbor(r, c, -dr, -dc).is_none_or(|n| m > n + tol(m, n));
                    ahead && behind
                }
            };
            if keep {
                out.data_mut()[idx] = m;
            }
        }
    }
    Ok(out)
}

/// Binarizes at `fraction × max`, ignoring values at or below [`MAGNITUDE_FLOOR`].
pub fn threshold(suppressed: &Plane, fraction: f64) -> EdgeMap {
    let cut = fraction * suppressed.max();
    let data = suppressed
        .data()
        .iter()
        .map(|&v| v > MAGNITUDE_FLOOR && v >= cut)
        .collect();
    EdgeMap::new(suppressed.rows(), suppressed.cols(), data)
}

fn check_size(img: &RgbImage) -> Result<()> {
    let (rows, cols) = img.shape();
    if rows < gradient::MIN_SIZE || cols < gradient::MIN_SIZE {
        return Err(Error::ImageTooSmall {
            rows,
            cols,
            min_rows: gradient::MIN_SIZE,
            min_cols: gradient::MIN_SIZE,
        });
    }
    Ok(())
}

/// Half-sample mirror extension to `2M × 2N`.
pub fn mirror_extend(f: &QuaternionImage) -> QuaternionImage {
    let (rows, cols) = f.shape();
    let fold = |i: usize, n: usize| if i < n { i } else { 2 * n - 1 - i };
    QuaternionImage::from_fn(2 * rows, 2 * cols, |r, c| {
        f.get(fold(r, rows), fold(c, cols))
    })
}

/// Top-left `rows × cols` block.
pub fn crop(f: &QuaternionImage, rows: usize, cols: usize) -> QuaternionImage {
    QuaternionImage::from_fn(rows, cols, |r, c| f.get(r, c))
}

/// Filtered quaternion signal for the given stage.
pub fn filtered_signal(
    img: &RgbImage,
    params: &DetectParams,
    stage: FilterStage,
) -> QuaternionImage {
    let f = rgb_to_quaternion(img, params.normalize);
    let filter = |g: &QuaternionImage| match stage {
        FilterStage::Hardy(p) => hardy::qhf_filter(g, &p),
        FilterStage::AnalyticSignal => hardy::analytic_signal(g),
        FilterStage::Bypass => g.clone(),
    };
    match (stage, params.boundary) {
        (FilterStage::Bypass, _) => f,
        (_, Boundary::Periodic) => filter(&f),
        (_, Boundary::Symmetric) => crop(&filter(&mirror_extend(&f)), f.rows(), f.cols()),
    }
}

/// Color gradient of the filtered signal, before suppression.
pub fn edge_strength(
    img: &RgbImage,
    params: &DetectParams,
    stage: FilterStage,
) -> Result<GradientField> {
    check_size(img)?;
    let filtered = filtered_signal(img, params, stage);
    gradient::color_gradient(&vector_channels(&filtered))
}

/// Suppressed magnitude field, before thresholding.
pub fn suppressed_strength(
    img: &RgbImage,
    params: &DetectParams,
    stage: FilterStage,
) -> Result<Plane> {
    let field = edge_strength(img, params, stage)?;
    nonmax_suppress(&field.magnitude, &field.direction)
}

pub fn detect_edges_with(
    img: &RgbImage,
    params: &DetectParams,
    stage: FilterStage,
) -> Result<EdgeMap> {
    let suppressed = suppressed_strength(img, params, stage)?;
    Ok(threshold(&suppressed, params.threshold_fraction))
}

/// Hardy-filtered edge detection with `params.hardy`.
pub fn detect_edges(img: &RgbImage, params: &DetectParams) -> Result<EdgeMap> {
    detect_edges_with(img, params, FilterStage::Hardy(params.hardy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn encoding_examples() {
        let red = RgbImage::filled(1, 1, [255, 0, 0]);
        assert_eq!(rgb_to_quaternion(&red, true).get(0, 0), Quaternion::I);
        let black = RgbImage::filled(3, 4, [0, 0, 0]);
        assert!(rgb_to_quaternion(&black, true)
            .data()
            .iter()
            .all(|q| *q == Quaternion::ZERO));
    }

    #[test]
    fn encoding_round_trips_through_vector_part() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let img = RgbImage::from_fn(4, 5, |_, _| [rng.random(), rng.random(), rng.random()]);
        let q = rgb_to_quaternion(&img, false);
        assert!(q.data().iter().all(|q| q.re == 0.0));
        let ch = vector_channels(&q);
        for r in 0..4 {
            for c in 0..5 {
                let px = img.get(r, c);
                for k in 0..3 {
                    assert_eq!(ch.planes()[k].get(r, c), px[k] as f64);
                }
            }
        }
    }

    #[test]
    fn ridge_keeps_only_its_crest() {
        let mag = Plane::new(1, 5, vec![0.0, 1.0, 2.0, 1.0, 0.0]);
        let dir = vec![Some(FRAC_PI_2); 5];
        let out = nonmax_suppress(&mag, &dir).unwrap();
        assert_eq!(out.data(), &[0.0, 0.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn tied_pair_keeps_its_first_pixel() {
        let mag = Plane::new(1, 6, vec![0.0, 1.0, 3.0, 3.0 + 4e-16, 1.0, 0.0]);
        let dir = vec![Some(-FRAC_PI_2); 6];
        let out = nonmax_suppress(&mag, &dir).unwrap();
        assert_eq!(out.data(), &[0.0, 0.0, 3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn plateau_keeps_its_leading_edge() {
        let mag = Plane::filled(4, 4, 3.0);
        let dir = vec![Some(FRAC_PI_2); 16];
        let out = nonmax_suppress(&mag, &dir).unwrap();
        for r in 0..4 {
            let row: Vec<f64> = (0..4).map(|c| out.get(r, c)).collect();
            assert_eq!(row, [3.0, 0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn a_clear_gap_is_not_a_tie() {
        let mag = Plane::new(1, 3, vec![1.0, 1.0 + 1e-6, 1.0]);
        let dir = vec![Some(FRAC_PI_2); 3];
        assert_eq!(
            nonmax_suppress(&mag, &dir).unwrap().data(),
            &[0.0, 1.0 + 1e-6, 0.0]
        );
    }

    #[test]
    fn undefined_direction_is_kept() {
        let mag = Plane::new(1, 3, vec![5.0, 1.0, 5.0]);
        let dir = vec![Some(FRAC_PI_2), None, Some(FRAC_PI_2)];
        assert_eq!(
            nonmax_suppress(&mag, &dir).unwrap().data(),
            &[5.0, 1.0, 5.0]
        );
    }

    #[test]
    fn suppression_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mag = Plane::from_fn(5, 5, |_, _| rng.random_range(0.0..1.0));
        let dir: Vec<_> = (0..25)
            .map(|i| {
                if i % 7 == 3 {
                    None
                } else {
                    Some(rng.random_range(-FRAC_PI_2..FRAC_PI_2))
                }
            })
            .collect();
        let out = nonmax_suppress(&mag, &dir).unwrap();
        for r in 0..5i32 {
            for c in 0..5i32 {
                let idx = (r * 5 + c) as usize;
                let m = mag.data()[idx];
                let expected = match dir[idx] {
                    None => m,
                    Some(t) => {
                        let mut d = t.to_degrees();
                        if d < 0.0 {
                            d += 180.0;
                        }
                        let sector = ((d / 45.0).round() as i32) % 4;
                        let (dr, dc) = [(1, 0), (1, 1), (0, 1), (1, -1)][sector as usize];
                        let inside =
                            |rr: i32, cc: i32| (0..5).contains(&rr) && (0..5).contains(&cc);
                        let at = |rr: i32, cc: i32| mag.get(rr as usize, cc as usize);
                        let ahead = !inside(r + dr, c + dc) || m >= at(r + dr, c + dc);
                        let behind = !inside(r - dr, c - dc) || m > at(r - dr, c - dc);
                        if ahead && behind {
                            m
                        } else {
                            0.0
                        }
                    }
                };
                assert_eq!(out.data()[idx], expected, "pixel ({r},{c})");
            }
        }
    }

    #[test]
    fn suppression_rejects_mismatched_direction() {
        assert!(nonmax_suppress(&Plane::zeros(3, 3), &[None; 8]).is_err());
    }

    #[test]
    fn threshold_rejects_out_of_range_fraction() {
        assert!(DetectParams::new(HardyParams::ANALYTIC, 1.5, true).is_err());
        assert!(DetectParams::new(HardyParams::ANALYTIC, -0.1, true).is_err());
    }

    #[test]
    fn tiny_images_are_rejected() {
        let img = RgbImage::filled(2, 8, [10, 20, 30]);
        assert!(matches!(
            detect_edges(&img, &DetectParams::default()),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn constant_image_has_no_edges() {
        let img = RgbImage::filled(17, 12, [40, 120, 200]);
        for scale in [0.0, 1.5, 4.0] {
            let params = DetectParams::with_scale(scale).unwrap();
            assert!(detect_edges(&img, &params).unwrap().is_empty());
        }
        assert!(Detector::IdzRaw
            .detect(&img, &DetectParams::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn mirror_extension_folds_each_axis() {
        let f = QuaternionImage::from_fn(2, 3, |r, c| Quaternion::pure(r as f64, c as f64, 0.0));
        let e = mirror_extend(&f);
        assert_eq!(e.shape(), (4, 6));
        let rows: Vec<f64> = (0..4).map(|r| e.get(r, 0).i).collect();
        let cols: Vec<f64> = (0..6).map(|c| e.get(0, c).j).collect();
        assert_eq!(rows, [0.0, 1.0, 1.0, 0.0]);
        assert_eq!(cols, [0.0, 1.0, 2.0, 2.0, 1.0, 0.0]);
        assert_eq!(crop(&e, 2, 3), f);
    }

    #[test]
    fn boundary_names_parse() {
        assert_eq!("periodic".parse::<Boundary>().unwrap(), Boundary::Periodic);
        assert_eq!(
            "symmetric".parse::<Boundary>().unwrap(),
            Boundary::Symmetric
        );
        assert!("wrap".parse::<Boundary>().is_err());
    }

    #[test]
    fn detector_names_round_trip() {
        for d in [Detector::Qhf, Detector::IdzRaw] {
            assert_eq!(d.name().parse::<Detector>().unwrap(), d);
        }
        assert!("canny".parse::<Detector>().is_err());
    }
}
