use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qhf::eval::{self, EvalConfig};
use qhf::noise::{self, NoiseKind, NoiseSpec};
use qhf::{io as image_io, selftest, Boundary, DetectParams, Detector, Error, HardyParams, Result};

const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "qhf",
    version,
    about = "Quaternion Hardy filter color edge detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect edges in one image and write a grayscale PNG edge map.
    Detect(DetectArgs),
    /// Add synthetic noise to an image.
    Noise(NoiseArgs),
    /// Compare clean-image and noisy-image edge maps with PSNR and SSIM.
    Eval(EvalArgs),
    /// Cross-check the fast transforms and metrics against direct references.
    Selftest,
}

#[derive(Debug, Args)]
struct FilterArgs {
    /// Vertical smoothing scale (default 1.5 on clean input, 4.0 with noise).
    #[arg(long, allow_negative_numbers = true)]
    s1: Option<f64>,
    /// Horizontal smoothing scale (default 1.5 on clean input, 4.0 with noise).
    #[arg(long, allow_negative_numbers = true)]
    s2: Option<f64>,
    /// Edge threshold as a fraction of the largest suppressed magnitude.
    #[arg(long, default_value_t = DetectParams::DEFAULT_THRESHOLD, allow_negative_numbers = true)]
    threshold: f64,
    /// Work on raw 0-255 intensities instead of scaling to [0, 1].
    #[arg(long)]
    no_normalize: bool,
    /// Border handling before filtering: `symmetric` (mirror) or `periodic`.
    #[arg(long, default_value = "symmetric")]
    boundary: Boundary,
    /// Noise seed.
    #[arg(long, env = "QHF_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl FilterArgs {
    fn params(&self, default_scale: f64) -> Result<DetectParams> {
        let hardy = HardyParams::new(
            self.s1.unwrap_or(default_scale),
            self.s2.unwrap_or(default_scale),
        )?;
        Ok(
            DetectParams::new(hardy, self.threshold, !self.no_normalize)?
                .with_boundary(self.boundary),
        )
    }
}

#[derive(Debug, Args)]
struct DetectArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    /// Corrupt the input first, e.g. `salt_pepper:density=0.05`.
    #[arg(long)]
    noise: Option<NoiseKind>,
    #[arg(long, default_value = "qhf")]
    detector: Detector,
    #[command(flatten)]
    filter: FilterArgs,
}

#[derive(Debug, Args)]
struct NoiseArgs {
    input: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    /// Noise model, e.g. `gaussian:variance=0.01` or `poisson:peak=255`.
    #[arg(long)]
    noise: NoiseKind,
    #[arg(long, env = "QHF_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Report path; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Noise models to apply (repeatable); all four defaults when omitted.
    #[arg(long)]
    noise: Vec<NoiseKind>,
    /// Detectors to compare (repeatable); qhf and idz_raw when omitted.
    #[arg(long)]
    detector: Vec<Detector>,
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
    /// Add clean-vs-clean rows with noise label `none`.
    #[arg(long)]
    sanity: bool,
    #[command(flatten)]
    filter: FilterArgs,
}

fn image_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn run_detect(args: &DetectArgs) -> Result<ExitCode> {
    let default_scale = if args.noise.is_some() {
        DetectParams::NOISY_SCALE
    } else {
        DetectParams::CLEAN_SCALE
    };
    let params = args.filter.params(default_scale)?;
    let mut img = image_io::load_image(&args.input)?;
    if let Some(kind) = args.noise {
        let id = image_id(&args.input);
        let spec = NoiseSpec::new(kind, noise::derive_seed(args.filter.seed, &id, &kind));
        img = noise::add_noise(&img, &spec)?;
    }
    let edges = args.detector.detect(&img, &params)?;
    image_io::save_edge_map(&edges, &args.out)?;
    eprintln!(
        "{}: {} edge pixels of {}",
        args.out.display(),
        edges.count(),
        edges.rows() * edges.cols()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_noise(args: &NoiseArgs) -> Result<ExitCode> {
    let img = image_io::load_image(&args.input)?;
    let spec = NoiseSpec::new(args.noise, args.seed);
    image_io::save_image(&noise::add_noise(&img, &spec)?, &args.out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_eval(args: &EvalArgs) -> Result<ExitCode> {
    let params = args.filter.params(DetectParams::NOISY_SCALE)?;
    let images = args
        .inputs
        .iter()
        .map(|p| Ok((image_id(p), image_io::load_image(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let config = EvalConfig {
        images,
        noises: if args.noise.is_empty() {
            NoiseKind::defaults().to_vec()
        } else {
            args.noise.clone()
        },
        detectors: if args.detector.is_empty() {
            vec![Detector::Qhf, Detector::IdzRaw]
        } else {
            args.detector.clone()
        },
        params,
        seed: args.filter.seed,
        sanity_rows: args.sanity,
    };
    let report = eval::run_eval(&config)?;

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.format {
        ReportFormat::Csv => report.write_csv(sink)?,
        ReportFormat::Json => report.write_json(sink)?,
    }
    for row in &report.rows {
        if let eval::Outcome::Failed(msg) = &row.outcome {
            eprintln!(
                "error: {} / {} / {}: {msg}",
                row.image, row.noise, row.detector
            );
        }
    }
    Ok(if report.has_failures() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    })
}

fn run_selftest() -> ExitCode {
    let checks = selftest::run_all();
    for c in &checks {
        println!(
            "[{}] {} ({})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if checks.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Noise(args) => run_noise(args),
        Command::Eval(args) => run_eval(args),
        Command::Selftest => Ok(run_selftest()),
    };
    result.unwrap_or_else(|e: Error| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
