use super::PdfEstimate;
use crate::error::{Error, Result};

/// Floor applied to both densities before taking the logarithm.
pub const KL_FLOOR: f64 = 1e-12;

/// A univariate density with a (possibly unbounded) support.
pub trait Density {
    fn support(&self) -> (f64, f64);

    /// Density at `u`; callers only ask for points inside the support.
    fn density(&self, u: f64) -> f64;
}

impl Density for PdfEstimate {
    fn support(&self) -> (f64, f64) {
        PdfEstimate::support(self)
    }

    fn density(&self, u: f64) -> f64 {
        self.pdf(u).unwrap_or(0.0)
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }

    fn density(&self, u: f64) -> f64 {
        (**self).density(u)
    }
}

/// Piecewise-linear density through tabulated `(u, f(u))` points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDensity {
    u: Vec<f64>,
    f: Vec<f64>,
}

impl TabulatedDensity {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                actual: points.len(),
                required: 2,
            });
        }
        if let Some(index) = points
            .iter()
            .position(|(u, f)| !u.is_finite() || !f.is_finite())
        {
            return Err(Error::NonFiniteInput { index });
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::NonMonotoneKnots(i + 1));
        }
        let (u, f) = points.into_iter().unzip();
        Ok(Self { u, f })
    }
}

impl Density for TabulatedDensity {
    fn support(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    fn density(&self, x: f64) -> f64 {
        let n = self.u.len();
        let i = self.u[1..n - 1].partition_point(|&k| k <= x);
        let t = (x - self.u[i]) / (self.u[i + 1] - self.u[i]);
        self.f[i] + t * (self.f[i + 1] - self.f[i])
    }
}

/// `KL(p || q) = int p ln(p / q)` over the intersection of the supports,
/// by the trapezoidal rule on `grid_size` equally spaced points.
///
/// Both densities are floored at [`KL_FLOOR`] before the logarithm.
pub fn kl_divergence<P: Density, Q: Density>(p: P, q: Q, grid_size: usize) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::InvalidGrid {
            actual: grid_size,
            min: 2,
        });
    }
    let (pa, pb) = p.support();
    let (qa, qb) = q.support();
    let lo = pa.max(qa);
    let hi = pb.min(qb);
    if hi <= lo || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DisjointSupports);
    }
    let step = (hi - lo) / (grid_size - 1) as f64;
    let integrand = |k: usize| {
        let u = if k == grid_size - 1 { hi } else { lo + step * k as f64 };
        let pu = p.density(u).max(KL_FLOOR);
        let qu = q.density(u).max(KL_FLOOR);
        pu * (pu / qu).ln()
    };
    let interior: f64 = (1..grid_size - 1).map(integrand).sum();
    Ok(step * (0.5 * (integrand(0) + integrand(grid_size - 1)) + interior))
}

/// Composite Simpson rule with `intervals` (rounded up to even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}
