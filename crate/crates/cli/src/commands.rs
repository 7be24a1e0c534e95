use std::io::Write;
use std::path::{Path, PathBuf};

use histspline::{
    count_turning_points, estimate_pdf, flatten_positions, generate_corpus, kl_divergence,
    simpson, PdfEstimate, Samples, TabulatedDensity,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::io;

pub const CORPUS_FILE: &str = "corpus.csv";
pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const CURVE_FILE: &str = "pdf.csv";
pub const SUMMARY_FILE: &str = "summary.jsonl";

/// Panels used for the quadrature cross-check of the total mass.
const SIMPSON_PANELS: usize = 10_000;
const ANALYTIC_MASS_TOLERANCE: f64 = 1e-12;
const SIMPSON_MASS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerateSummary {
    pub path: PathBuf,
    pub series: usize,
    pub samples: usize,
    pub min_x_end: f64,
    pub max_x_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateSummary {
    pub input: String,
    pub samples: usize,
    pub rule: String,
    pub bin_count: usize,
    pub boundary: String,
    pub support: [f64; 2],
    pub grid: usize,
    pub integral: f64,
    pub simpson_integral: f64,
    pub normalization_ok: bool,
    pub min_density: f64,
    pub negative_density: bool,
    pub turning_points: usize,
}

impl EstimateSummary {
    pub fn new(input: String, samples: usize, est: &PdfEstimate, grid: usize) -> Self {
        let (lo, hi) = est.support();
        let integral = est.total_mass();
        let simpson_integral = simpson(|u| est.pdf(u).unwrap_or(0.0), lo, hi, SIMPSON_PANELS);
        let min_density = est.min_density();
        Self {
            input,
            samples,
            rule: est.rule().to_string(),
            bin_count: est.bin_count(),
            boundary: est.boundary().to_string(),
            support: [lo, hi],
            grid,
            integral,
            simpson_integral,
            normalization_ok: (integral - 1.0).abs() <= ANALYTIC_MASS_TOLERANCE
                && (simpson_integral - 1.0).abs() <= SIMPSON_MASS_TOLERANCE,
            min_density,
            negative_density: min_density < 0.0,
            turning_points: count_turning_points(est),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub a: PathBuf,
    pub b: PathBuf,
    pub grid: usize,
    pub kl_ab: f64,
    pub kl_ba: f64,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("summaries serialize");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, line: &str) -> Result<()> {
    out.write_all(line.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Writes the braking corpus to `<out_dir>/corpus.csv`.
pub fn cmd_generate(config: &RunConfig, out: &mut dyn Write) -> Result<GenerateSummary> {
    config.generator.validate()?;
    let corpus = generate_corpus(&config.generator)?;
    ensure_dir(&config.out_dir)?;
    let path = config.out_dir.join(CORPUS_FILE);
    io::write_corpus(&path, &corpus)?;
    let ends = corpus.iter().map(|s| s.final_position());
    let summary = GenerateSummary {
        path,
        series: corpus.len(),
        samples: corpus.iter().map(|s| s.len()).sum(),
        min_x_end: ends.clone().fold(f64::INFINITY, f64::min),
        max_x_end: ends.fold(f64::NEG_INFINITY, f64::max),
    };
    emit(out, &json_line(&summary))?;
    Ok(summary)
}

/// Samples from the configured source, with a label describing it.
pub fn load_samples(config: &RunConfig) -> Result<(String, Samples)> {
    let est = &config.estimate;
    match (&est.input, est.generate) {
        (Some(_), true) => Err(CliError::Usage(
            "give either --input or --generate, not both".into(),
        )),
        (None, false) => Err(CliError::Usage(
            "no input: give --input FILE or --generate".into(),
        )),
        (Some(path), false) => {
            let values = io::read_columns(path, &[est.column.as_str()])?.remove(0);
            Ok((path.display().to_string(), Samples::new(values)?))
        }
        (None, true) => {
            config.generator.validate()?;
            let corpus = generate_corpus(&config.generator)?;
            Ok(("generated".to_string(), Samples::new(flatten_positions(&corpus))?))
        }
    }
}

/// Fits the density and writes the histogram, curve, and summary files.
pub fn cmd_estimate(config: &RunConfig, out: &mut dyn Write) -> Result<EstimateSummary> {
    config.validate_grid()?;
    let rule = config.rule()?;
    let boundary = config.boundary()?;
    let (label, samples) = load_samples(config)?;
    let est = estimate_pdf(&samples, rule, boundary)?;
    let summary = EstimateSummary::new(label, samples.len(), &est, config.estimate.grid);

    ensure_dir(&config.out_dir)?;
    io::write_histogram(&config.out_dir.join(HISTOGRAM_FILE), est.histogram())?;
    io::write_curve(&config.out_dir.join(CURVE_FILE), &est.grid(config.estimate.grid)?)?;
    let line = json_line(&summary);
    io::write_text(&config.out_dir.join(SUMMARY_FILE), &line)?;
    emit(out, &line)?;

    if summary.negative_density {
        eprintln!(
            "warning: density estimate dips below zero (minimum {})",
            summary.min_density
        );
    }
    if !summary.normalization_ok {
        return Err(CliError::Numeric(histspline::Error::NotNormalized(
            summary.integral,
        )));
    }
    Ok(summary)
}

/// KL divergence in both directions between two exported density curves.
pub fn cmd_compare(a: &Path, b: &Path, grid: usize, out: &mut dyn Write) -> Result<CompareReport> {
    if grid < 2 {
        return Err(CliError::Usage(format!("grid size must be at least 2, got {grid}")));
    }
    let pa = TabulatedDensity::new(io::read_curve(a)?)?;
    let pb = TabulatedDensity::new(io::read_curve(b)?)?;
    let report = CompareReport {
        a: a.to_path_buf(),
        b: b.to_path_buf(),
        grid,
        kl_ab: kl_divergence(&pa, &pb, grid)?,
        kl_ba: kl_divergence(&pb, &pa, grid)?,
    };
    emit(out, &json_line(&report))?;
    Ok(report)
}
