//! Batch robustness evaluation.
//!
//! For every (image, noise, detector) cell the harness detects edges on the
//! clean image and on a noisy copy, then compares the two maps as `{0, 255}`
//! planes with PSNR (peak 255) and SSIM. Rows come out in configuration
//! order: image, then noise, then detector.

use std::io::Write;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics;
use crate::noise::{self, NoiseKind, NoiseSpec};
use crate::pipeline::{DetectParams, Detector, EdgeMap, RgbImage};

/// Column set shared by the CSV and JSON reports.
pub const REPORT_HEADER: [&str; 5] = ["image", "noise", "detector", "psnr_db", "ssim"];

/// Noise label of the optional clean-vs-clean sanity rows.
pub const SANITY_LABEL: &str = "none";

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub images: Vec<(String, RgbImage)>,
    pub noises: Vec<NoiseKind>,
    pub detectors: Vec<Detector>,
    pub params: DetectParams,
    pub seed: u64,
    /// Prepend one clean-vs-clean row per (image, detector).
    pub sanity_rows: bool,
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.images.is_empty() {
            return Err(Error::invalid(
                "images",
                "at least one input image is required",
            ));
        }
        if self.detectors.is_empty() {
            return Err(Error::invalid(
                "detectors",
                "at least one detector is required",
            ));
        }
        if self.noises.is_empty() && !self.sanity_rows {
            return Err(Error::invalid(
                "noise",
                "at least one noise model is required",
            ));
        }
        for kind in &self.noises {
            kind.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Scores { psnr_db: f64, ssim: f64 },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub image: String,
    pub noise: String,
    pub detector: String,
    pub outcome: Outcome,
}

impl ReportRow {
    pub fn scores(&self) -> Option<(f64, f64)> {
        match self.outcome {
            Outcome::Scores { psnr_db, ssim } => Some((psnr_db, ssim)),
            Outcome::Failed(_) => None,
        }
    }
}

fn format_psnr(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

impl Serialize for ReportRow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ReportRow", 6)?;
        s.serialize_field("image", &self.image)?;
        s.serialize_field("noise", &self.noise)?;
        s.serialize_field("detector", &self.detector)?;
        match &self.outcome {
            Outcome::Scores { psnr_db, ssim } => {
                // JSON has no infinity; identical maps report the string "inf".
                if psnr_db.is_finite() {
                    s.serialize_field("psnr_db", psnr_db)?;
                } else {
                    s.serialize_field("psnr_db", &format_psnr(*psnr_db))?;
                }
                s.serialize_field("ssim", ssim)?;
                s.skip_field("error")?;
            }
            Outcome::Failed(msg) => {
                s.serialize_field("psnr_db", &Option::<f64>::None)?;
                s.serialize_field("ssim", &Option::<f64>::None)?;
                s.serialize_field("error", msg)?;
            }
        }
        s.end()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MetricsReport {
    pub rows: Vec<ReportRow>,
}

impl MetricsReport {
    pub fn has_failures(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r.outcome, Outcome::Failed(_)))
    }

    /// CSV with header `image,noise,detector,psnr_db,ssim`, LF line endings.
    /// Infinite PSNR is written as `inf`; failed cells carry `failed` in both
    /// metric columns.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let to_io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(REPORT_HEADER).map_err(to_io)?;
        for row in &self.rows {
            let (p, s) = match row.outcome {
                Outcome::Scores { psnr_db, ssim } => (format_psnr(psnr_db), format!("{ssim:.6}")),
                Outcome::Failed(_) => ("failed".to_string(), "failed".to_string()),
            };
            w.write_record([&row.image, &row.noise, &row.detector, &p, &s])
                .map_err(to_io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self).map_err(|e| Error::Io(e.into()))?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("report is UTF-8")
    }
}

/// PSNR and SSIM between two edge maps viewed as `{0, 255}` planes.
pub fn compare_edge_maps(reference: &EdgeMap, candidate: &EdgeMap) -> Result<(f64, f64)> {
    let (a, b) = (reference.to_plane(), candidate.to_plane());
    Ok((metrics::psnr(&a, &b, 255.0)?, metrics::ssim(&a, &b)?))
}

fn score(clean: &Result<EdgeMap>, noisy: Result<EdgeMap>) -> Outcome {
    let result = clean
        .as_ref()
        .map_err(|e| Error::invalid("clean", e.to_string()))
        .and_then(|c| compare_edge_maps(c, &noisy?));
    match result {
        Ok((psnr_db, ssim)) => Outcome::Scores { psnr_db, ssim },
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

/// Runs every cell of the experiment grid. Cell failures become `Failed`
/// rows; the remaining cells still run.
pub fn run_eval(config: &EvalConfig) -> Result<MetricsReport> {
    config.validate()?;
    let mut rows = Vec::new();
    for (id, img) in &config.images {
        let clean: Vec<Result<EdgeMap>> = config
            .detectors
            .iter()
            .map(|d| d.detect(img, &config.params))
            .collect();

        if config.sanity_rows {
            for (det, edges) in config.detectors.iter().zip(&clean) {
                let again = edges
                    .as_ref()
                    .cloned()
                    .map_err(|e| Error::invalid("clean", e.to_string()));
                rows.push(ReportRow {
                    image: id.clone(),
                    noise: SANITY_LABEL.to_string(),
                    detector: det.name().to_string(),
                    outcome: score(edges, again),
                });
            }
        }

        for kind in &config.noises {
            let spec = NoiseSpec::new(*kind, noise::derive_seed(config.seed, id, kind));
            let noisy = noise::add_noise(img, &spec);
            for (det, clean_edges) in config.detectors.iter().zip(&clean) {
                let noisy_edges = match &noisy {
                    Ok(n) => det.detect(n, &config.params),
                    Err(e) => Err(Error::invalid("noise", e.to_string())),
                };
                rows.push(ReportRow {
                    image: id.clone(),
                    noise: kind.name().to_string(),
                    detector: det.name().to_string(),
                    outcome: score(clean_edges, noisy_edges),
                });
            }
        }
    }
    Ok(MetricsReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn config(noises: Vec<NoiseKind>, seed: u64) -> EvalConfig {
        EvalConfig {
            images: vec![("shapes".to_string(), synth::shapes(48))],
            noises,
            detectors: vec![Detector::Qhf, Detector::IdzRaw],
            params: DetectParams::with_scale(DetectParams::NOISY_SCALE).unwrap(),
            seed,
            sanity_rows: false,
        }
    }

    #[test]
    fn zero_density_gives_identical_maps() {
        let report = run_eval(&config(vec![NoiseKind::SaltPepper { density: 0.0 }], 3)).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.scores(), Some((f64::INFINITY, 1.0)));
        }
        let csv = report.to_csv_string();
        assert_eq!(
            csv,
            "image,noise,detector,psnr_db,ssim\n\
             shapes,salt_pepper,qhf,inf,1.000000\n\
             shapes,salt_pepper,idz_raw,inf,1.000000\n"
        );
    }

    #[test]
    fn rows_follow_config_order() {
        let report = run_eval(&config(NoiseKind::defaults().to_vec(), 1)).unwrap();
        let labels: Vec<_> = report
            .rows
            .iter()
            .map(|r| format!("{}/{}", r.noise, r.detector))
            .collect();
        assert_eq!(
            labels,
            [
                "gaussian/qhf",
                "gaussian/idz_raw",
                "poisson/qhf",
                "poisson/idz_raw",
                "salt_pepper/qhf",
                "salt_pepper/idz_raw",
                "speckle/qhf",
                "speckle/idz_raw",
            ]
        );
    }

    #[test]
    fn seeds_change_values_not_structure() {
        let a = run_eval(&config(NoiseKind::defaults().to_vec(), 1)).unwrap();
        let b = run_eval(&config(NoiseKind::defaults().to_vec(), 2)).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        assert_ne!(a, b);
        assert_eq!(
            a,
            run_eval(&config(NoiseKind::defaults().to_vec(), 1)).unwrap()
        );
    }

    #[test]
    fn failures_become_marker_rows() {
        let mut cfg = config(vec![NoiseKind::Gaussian { variance: 0.01 }], 1);
        cfg.images
            .push(("tiny".to_string(), RgbImage::filled(6, 6, [9, 9, 9])));
        let report = run_eval(&cfg).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.has_failures());
        assert!(report.rows[..2].iter().all(|r| r.scores().is_some()));
        assert!(report.rows[2..].iter().all(|r| r.scores().is_none()));
        assert!(report
            .to_csv_string()
            .ends_with("tiny,gaussian,idz_raw,failed,failed\n"));
    }

    #[test]
    fn sanity_rows_compare_clean_to_clean() {
        let mut cfg = config(vec![], 1);
        cfg.sanity_rows = true;
        let report = run_eval(&cfg).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report
            .rows
            .iter()
            .all(|r| r.noise == SANITY_LABEL && r.scores() == Some((f64::INFINITY, 1.0))));
    }

    #[test]
    fn json_report_keeps_columns_and_spells_out_infinity() {
        let report = run_eval(&config(vec![NoiseKind::SaltPepper { density: 0.0 }], 3)).unwrap();
        let mut buf = Vec::new();
        report.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let first = &v[0];
        for key in REPORT_HEADER {
            assert!(first.get(key).is_some(), "{key}");
        }
        assert_eq!(first["psnr_db"], "inf");
        assert_eq!(first["ssim"], 1.0);
    }

    #[test]
    fn empty_configs_are_rejected() {
        let mut cfg = config(vec![NoiseKind::Gaussian { variance: 0.01 }], 1);
        cfg.detectors.clear();
        assert!(run_eval(&cfg).is_err());
        let mut cfg = config(vec![NoiseKind::Gaussian { variance: 0.01 }], 1);
        cfg.images.clear();
        assert!(run_eval(&cfg).is_err());
        assert!(run_eval(&config(vec![], 1)).is_err());
    }
}
