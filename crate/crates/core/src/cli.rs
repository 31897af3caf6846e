//! Command-line driver.

use std::ffi::OsString;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::contours::render_contours;
use crate::distance::{CurveRole, DistanceKind, StopSetSpec};
use crate::domain::InpaintDomain;
use crate::error::{Error, Result};
use crate::fixtures::{CaseKind, SyntheticCase};
use crate::io;
use crate::pipeline::{run_pipeline, RunParams, RunReport};
use crate::raster::RasterImage;
use crate::transport::{FillParams, Kernel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INADMISSIBLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub const LISTEN_ENV: &str = "COHERENCE_INPAINT_LISTEN";

#[derive(Debug, Parser)]
#[command(name = "coherence-inpaint", version, about = "Single-pass coherence-transport inpainting")]
pub struct Cli {
    /// Damaged image (8-bit gray or RGB PNG).
    #[arg(long, value_name = "PNG", required_unless_present_any = ["case", "serve"], requires = "mask")]
    pub input: Option<PathBuf>,

    /// Inpainting mask; pixels with luminance >= 128 are filled.
    #[arg(long, value_name = "PNG", requires = "input")]
    pub mask: Option<PathBuf>,

    /// Use a built-in synthetic case instead of --input/--mask.
    #[arg(long, conflicts_with_all = ["input", "mask"])]
    pub case: Option<CaseKind>,

    /// Write the synthetic case (image, mask, truth, reference curves) to this directory.
    #[arg(long, value_name = "DIR", requires = "case")]
    pub write_case: Option<PathBuf>,

    #[arg(long, default_value = "dtb", value_parser = ["dtb", "harmonic", "active-dtb", "skeleton"])]
    pub distance: String,

    /// Stop-set or skeleton document (JSON); required for harmonic and skeleton.
    #[arg(long, value_name = "JSON")]
    pub stopset: Option<PathBuf>,

    #[arg(long, default_value_t = 5.0)]
    pub epsilon: f64,

    #[arg(long, default_value_t = 100.0)]
    pub mu: f64,

    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,

    #[arg(long, default_value_t = 10.0)]
    pub rho: f64,

    /// Active-boundary threshold, read by active-dtb only.
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,

    #[arg(long, default_value = "coherence", value_parser = ["coherence", "telea"])]
    pub kernel: String,

    /// Inpainted result (PNG).
    #[arg(long, value_name = "PNG")]
    pub out: Option<PathBuf>,

    /// Result (or damaged image if inadmissible) overlaid with distance contours.
    #[arg(long, value_name = "PNG")]
    pub contours_out: Option<PathBuf>,

    #[arg(long, default_value_t = 10)]
    pub levels: usize,

    /// Distance field as a TFLD raster.
    #[arg(long, value_name = "FILE")]
    pub dump_distance: Option<PathBuf>,

    /// Run the HTTP service instead of a job.
    #[arg(long, conflicts_with_all = ["input", "case"])]
    pub serve: bool,

    #[arg(long, env = LISTEN_ENV, default_value = "127.0.0.1:8080")]
    pub listen: SocketAddr,
}

/// Where the image and mask come from.
#[derive(Debug, Clone, PartialEq)]
pub enum JobSource {
    Files { input: PathBuf, mask: PathBuf },
    Case(CaseKind),
}

/// A validated batch job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub source: JobSource,
    pub params: RunParams,
    pub stopset: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub contours_out: Option<PathBuf>,
    pub levels: usize,
    pub dump_distance: Option<PathBuf>,
}

impl JobConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let source = match (&cli.case, &cli.input, &cli.mask) {
            (Some(case), _, _) => JobSource::Case(*case),
            (None, Some(input), Some(mask)) => JobSource::Files {
                input: input.clone(),
                mask: mask.clone(),
            },
            _ => return Err(Error::InvalidParameter("need --input and --mask, or --case".into())),
        };
        let distance: DistanceKind = cli.distance.parse()?;
        let kernel: Kernel = cli.kernel.parse()?;
        let fill = FillParams {
            epsilon: cli.epsilon,
            mu: cli.mu,
            sigma: cli.sigma,
            rho: cli.rho,
            kernel,
        };
        let config = Self {
            source,
            params: RunParams::new(distance, fill).with_gamma(cli.gamma),
            stopset: cli.stopset.clone(),
            out: cli.out.clone(),
            contours_out: cli.contours_out.clone(),
            levels: cli.levels,
            dump_distance: cli.dump_distance.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let needs_curves = matches!(self.params.distance, DistanceKind::Harmonic | DistanceKind::Skeleton);
        if needs_curves && self.stopset.is_none() {
            return Err(Error::InvalidParameter(format!(
                "{} distance needs --stopset",
                self.params.distance.name()
            )));
        }
        if self.levels == 0 {
            return Err(Error::InvalidParameter("--levels must be at least 1".into()));
        }
        Ok(())
    }
}

/// Report line printed on standard output.
#[derive(Debug, Serialize)]
struct CliReport<'a> {
    #[serde(flatten)]
    run: &'a RunReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Image(_) | Error::UnsupportedImage(_) | Error::FieldFormat(_) => EXIT_IO,
        Error::Inadmissible { .. } => EXIT_INADMISSIBLE,
        Error::NoConvergence { .. } | Error::StarvedPixel { .. } => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn load_inputs(source: &JobSource) -> Result<(RasterImage, InpaintDomain)> {
    match source {
        JobSource::Files { input, mask } => {
            let image = io::load_image(input)?;
            let mask = io::load_mask(mask)?;
            let domain = InpaintDomain::new(&image, &mask)?;
            Ok((image, domain))
        }
        JobSource::Case(kind) => {
            let s = SyntheticCase::new(*kind).generate()?;
            let domain = s.domain()?;
            Ok((s.image, domain))
        }
    }
}

fn load_curves(config: &JobConfig, image: &RasterImage) -> Result<(Option<StopSetSpec>, Vec<String>)> {
    let Some(path) = &config.stopset else {
        return Ok((None, Vec::new()));
    };
    if !matches!(config.params.distance, DistanceKind::Harmonic | DistanceKind::Skeleton) {
        log::warn!("--stopset is ignored for {} distance", config.params.distance.name());
        return Ok((None, Vec::new()));
    }
    let parsed = io::load_stopset(path, image.width(), image.height())?;
    Ok((Some(parsed.spec), parsed.warnings))
}

/// Writes the damaged image, mask, ground truth and reference curve documents of a case.
pub fn write_case(kind: CaseKind, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let case = SyntheticCase::new(kind);
    let s = case.generate()?;
    io::save_image(&s.image, dir.join("image.png"))?;
    io::save_image(&io::mask_to_image(&s.mask), dir.join("mask.png"))?;
    io::save_image(&s.truth, dir.join("truth.png"))?;
    for dk in [DistanceKind::Harmonic, DistanceKind::Skeleton] {
        if let Some(curves) = case.reference_curves(dk) {
            let name = match curves.role {
                CurveRole::Stop => "stopset.json",
                CurveRole::Skeleton => "skeleton.json",
            };
            let path = dir.join(name);
            std::fs::write(&path, curves.to_json()).map_err(|source| Error::Io { path, source })?;
        }
    }
    Ok(())
}

/// Runs one job; returns the report, or the error that stopped it.
pub fn run_job(config: &JobConfig) -> Result<(RunReport, Vec<String>)> {
    let (image, domain) = load_inputs(&config.source)?;
    let (curves, warnings) = load_curves(config, &image)?;
    let out = run_pipeline(&image, &domain, curves.as_ref(), &config.params)?;
    if let Some(path) = &config.dump_distance {
        io::save_field(&out.field, path)?;
    }
    if let Some(path) = &config.contours_out {
        let base = out.result.as_ref().unwrap_or(&image);
        io::save_image(&render_contours(&out.field, base, config.levels)?, path)?;
    }
    if let (Some(path), Some(result)) = (&config.out, &out.result) {
        io::save_image(result, path)?;
    }
    Ok((out.report, warnings))
}

fn serve(addr: SocketAddr) -> i32 {
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: cannot start runtime: {e}");
            return EXIT_FAILURE;
        }
    };
    match runtime.block_on(crate::service::serve(addr)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {addr}: {e}");
            EXIT_IO
        }
    }
}

/// Parses `args` (including the program name), runs, and returns the exit code.
/// The report line goes to `stdout`; diagnostics go to standard error.
pub fn run_cli_with<I, T>(args: I, stdout: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.serve {
        return serve(cli.listen);
    }
    if let (Some(kind), Some(dir)) = (cli.case, &cli.write_case) {
        if let Err(e) = write_case(kind, dir) {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    }
    let config = match JobConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run_job(&config) {
        Ok((report, warnings)) => {
            let line = serde_json::to_string(&CliReport {
                run: &report,
                warnings,
            })
            .expect("report serializes");
            let _ = writeln!(stdout, "{line}");
            if report.admissibility.valid {
                EXIT_OK
            } else {
                eprintln!(
                    "error: distance field is not admissible ({} offending pixels)",
                    report.admissibility.offending_pixels.len()
                );
                EXIT_INADMISSIBLE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(args, &mut std::io::stdout().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("coherence-inpaint").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn harmonic_without_stopset_is_rejected() {
        let cli = parse(&["--case", "diagonal", "--distance", "harmonic"]);
        assert!(matches!(JobConfig::from_cli(&cli), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn defaults_are_the_standard_parameters() {
        let cfg = JobConfig::from_cli(&parse(&["--input", "a.png", "--mask", "m.png"])).unwrap();
        assert_eq!(cfg.params.fill, FillParams::coherence(5.0, 100.0, 0.5, 10.0));
        assert_eq!(cfg.params.distance, DistanceKind::Boundary);
        assert_eq!(cfg.levels, 10);
    }

    #[test]
    fn gamma_is_checked_for_active_boundary_only() {
        assert!(JobConfig::from_cli(&parse(&["--case", "stripes", "--distance", "active-dtb", "--gamma", "0"])).is_err());
        assert!(JobConfig::from_cli(&parse(&["--case", "stripes", "--gamma", "0"])).is_ok());
    }

    #[test]
    fn input_and_case_conflict() {
        let r = Cli::try_parse_from(["x", "--case", "stripes", "--input", "a.png", "--mask", "b.png"]);
        assert!(r.is_err());
        assert!(Cli::try_parse_from(["x"]).is_err());
        assert!(Cli::try_parse_from(["x", "--input", "a.png"]).is_err());
    }

    #[test]
    fn io_errors_map_to_four() {
        let e = Error::Io {
            path: "x".into(),
            source: std::io::Error::other("gone"),
        };
        assert_eq!(exit_code(&e), EXIT_IO);
        assert_eq!(exit_code(&Error::EmptyMask), EXIT_USAGE);
    }
}
