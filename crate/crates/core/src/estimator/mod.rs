//! Density estimation by differentiating a cubic spline fitted to the
//! cumulative histogram masses.
//!
//! The pipeline is: choose a bin count, build a normalized histogram,
//! accumulate the bin masses into `F` at the bin edges, interpolate `F`
//! with a cubic spline, and take the spline's derivative as the density.
//! Because the density is an exact derivative of an interpolant of `F`,
//! its integral over every bin equals that bin's mass.

mod divergence;

pub use divergence::{kl_divergence, simpson, Density, TabulatedDensity, KL_FLOOR};

use crate::error::{Error, Result};
use crate::histogram::{build_histogram, select_bin_count, BinRule, Histogram, Samples};
use crate::spline::{fit_interpolating_spline, BoundaryCondition, CubicSplineModel};

/// Tolerance on the total histogram mass accepted by [`cumulative_masses`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Running integral of a histogram evaluated at its edges.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeProfile {
    x: Vec<f64>,
    mass: Vec<f64>,
}

impl CumulativeProfile {
    /// Bin edges.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Cumulative mass at each edge; starts at exactly zero.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// `F_0 = 0`, `F_{i+1} = F_i + h_i (t_{i+1} - t_i)`.
///
/// Rejects histograms whose total mass is not one.
pub fn cumulative_masses(hist: &Histogram) -> Result<CumulativeProfile> {
    let total = hist.total_mass();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(total));
    }
    let mut mass = Vec::with_capacity(hist.bin_count() + 1);
    mass.push(0.0);
    let mut acc = 0.0;
    for m in hist.masses() {
        acc += m;
        mass.push(acc);
    }
    Ok(CumulativeProfile {
        x: hist.edges().to_vec(),
        mass,
    })
}

/// Smooth density over the histogram support.
#[derive(Debug, Clone, PartialEq)]
pub struct PdfEstimate {
    spline: CubicSplineModel,
    histogram: Histogram,
    rule: BinRule,
}

impl PdfEstimate {
    /// Fitted spline of the cumulative masses; its derivative is the density.
    pub fn spline(&self) -> &CubicSplineModel {
        &self.spline
    }

    pub fn histogram(&self) -> &Histogram {
        &self.histogram
    }

    pub fn rule(&self) -> BinRule {
        self.rule
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.spline.boundary()
    }

    pub fn bin_count(&self) -> usize {
        self.histogram.bin_count()
    }

    pub fn support(&self) -> (f64, f64) {
        self.spline.support()
    }

    /// Density at `u`. May be negative where the spline undershoots.
    pub fn pdf(&self, u: f64) -> Result<f64> {
        self.spline.derivative(u)
    }

    /// Exact integral of the density over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        Ok(self.spline.eval(b)? - self.spline.eval(a)?)
    }

    /// Exact integral over the whole support.
    pub fn total_mass(&self) -> f64 {
        let f = self.spline.values();
        f[f.len() - 1] - f[0]
    }

    /// `(u, pdf(u))` on `n` equally spaced points spanning the support.
    pub fn grid(&self, n: usize) -> Result<Vec<(f64, f64)>> {
        if n < 2 {
            return Err(Error::InvalidGrid { actual: n, min: 2 });
        }
        let (lo, hi) = self.support();
        let step = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|k| {
                let u = if k == n - 1 { hi } else { lo + step * k as f64 };
                Ok((u, self.pdf(u)?))
            })
            .collect()
    }

    /// Smallest density over the support.
    ///
    /// Exact: extrema of each quadratic segment are at its ends or at its
    /// vertex.
    pub fn min_density(&self) -> f64 {
        let knots = self.spline.knots();
        self.spline
            .segment_coeffs()
            .iter()
            .enumerate()
            .map(|(i, &[_, c1, c2, c3])| {
                let h = knots[i + 1] - knots[i];
                let at = |s: f64| c1 + s * (2.0 * c2 + 3.0 * c3 * s);
                let mut lo = at(0.0).min(at(h));
                if c3 != 0.0 {
                    let vertex = -c2 / (3.0 * c3);
                    if vertex > 0.0 && vertex < h {
                        lo = lo.min(at(vertex));
                    }
                }
                lo
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Density estimate of `samples` with bins chosen by `rule`.
pub fn estimate_pdf(
    samples: &Samples,
    rule: BinRule,
    boundary: BoundaryCondition,
) -> Result<PdfEstimate> {
    let bins = select_bin_count(samples, rule)?;
    if bins + 1 < boundary.min_points() {
        return Err(Error::TooFewBins {
            bins,
            boundary: boundary.name(),
        });
    }
    let histogram = build_histogram(samples, bins)?;
    let profile = cumulative_masses(&histogram)?;
    let spline = fit_interpolating_spline(profile.x(), profile.mass(), boundary)?;
    Ok(PdfEstimate {
        spline,
        histogram,
        rule,
    })
}

/// Density of `est` at `u`.
pub fn pdf_eval(est: &PdfEstimate, u: f64) -> Result<f64> {
    est.pdf(u)
}

/// Knots at which the density's curvature changes sign.
///
/// The density's second derivative is the spline's third derivative,
/// constant on each segment, so sign changes can only occur at interior
/// knots. Segments whose third derivative is negligible relative to the
/// density scale are treated as zero and skipped.
pub fn turning_points(est: &PdfEstimate) -> Vec<f64> {
    let spline = est.spline();
    let knots = spline.knots();
    let min_width = knots
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let peak = spline
        .segment_coeffs()
        .iter()
        .map(|c| c[1].abs())
        .fold(1.0 / (knots[knots.len() - 1] - knots[0]), f64::max);
    let threshold = 1e-9 * peak / (min_width * min_width);

    let mut points = Vec::new();
    let mut last_sign = 0.0;
    for (i, d3) in spline.third_derivatives().enumerate() {
        if d3.abs() <= threshold {
            continue;
        }
        let sign = d3.signum();
        if last_sign != 0.0 && sign != last_sign {
            points.push(knots[i]);
        }
        last_sign = sign;
    }
    points
}

/// Number of curvature sign changes (inflections) of the density.
pub fn count_turning_points(est: &PdfEstimate) -> usize {
    turning_points(est).len()
}
