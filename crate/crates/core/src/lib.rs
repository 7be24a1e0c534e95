//! Probability density estimation from histograms and cubic splines.
//!
//! A histogram of the samples is accumulated into a cumulative mass
//! profile at the bin edges, the profile is interpolated by a cubic spline
//! under a chosen end condition, and the spline's derivative is returned
//! as a smooth density whose integral over every bin equals that bin's
//! mass.
//!
//! ```
//! use histspline::{estimate_pdf, BinRule, BoundaryCondition, Samples};
//!
//! let values: Vec<f64> = (0..1000).map(|i| (i as f64 * 0.618).fract()).collect();
//! let samples = Samples::new(values).unwrap();
//! let est = estimate_pdf(&samples, BinRule::knuth(), BoundaryCondition::Natural).unwrap();
//! assert!((est.total_mass() - 1.0).abs() < 1e-12);
//! let density_at_half = est.pdf(0.5).unwrap();
//! assert!((density_at_half - 1.0).abs() < 0.2);
//! ```
//!
//! The [`datagen`] module produces the emergency-braking position series
//! used to exercise the estimator.

pub mod datagen;
mod error;
pub mod estimator;
pub mod histogram;
pub mod spline;

pub use datagen::{
    flatten_positions, generate_corpus, simulate_braking, BrakingScenario, CorpusConfig,
    ParamRange, RngKind, TimeSeries,
};
pub use error::{Error, Result};
pub use estimator::{
    count_turning_points, cumulative_masses, estimate_pdf, kl_divergence, pdf_eval, simpson,
    turning_points, CumulativeProfile, Density, PdfEstimate, TabulatedDensity,
};
pub use histogram::{
    build_histogram, knuth_log_posterior, select_bin_count, BinRule, Histogram, Samples,
};
pub use spline::{
    bspline_basis, bspline_basis_derivative, fit_interpolating_spline, spline_derivative_eval,
    spline_eval, BSplineCurve, BoundaryCondition, CubicSplineModel, KnotVector,
};
