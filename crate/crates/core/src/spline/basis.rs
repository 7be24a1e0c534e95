//! B-spline basis functions by the Cox-de Boor recursion, their
//! derivatives, and curves built from them.
//!
//! Quotients with a zero denominator (repeated knots) are taken as zero.

use crate::error::{Error, Result};

/// Non-decreasing knot sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    tau: Vec<f64>,
}

impl KnotVector {
    pub fn new(tau: Vec<f64>) -> Result<Self> {
        if tau.len() < 2 {
            return Err(Error::TooFewPoints {
                actual: tau.len(),
                required: 2,
            });
        }
        if let Some(index) = tau.iter().position(|t| !t.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        if let Some(i) = tau.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::NonMonotoneKnots(i + 1));
        }
        Ok(Self { tau })
    }

    /// `n` equally spaced knots from `a` to `b`.
    pub fn uniform(n: usize, a: f64, b: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints {
                actual: n,
                required: 2,
            });
        }
        let step = (b - a) / (n - 1) as f64;
        Self::new((0..n).map(|i| a + step * i as f64).collect())
    }

    /// Breakpoints with each end repeated `degree + 1` times, the usual
    /// knot layout for an interpolating spline on `[first, last]`.
    pub fn clamped(breakpoints: &[f64], degree: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::TooFewPoints {
                actual: breakpoints.len(),
                required: 2,
            });
        }
        let first = breakpoints[0];
        let last = breakpoints[breakpoints.len() - 1];
        let mut tau = vec![first; degree];
        tau.extend_from_slice(breakpoints);
        tau.extend(std::iter::repeat_n(last, degree));
        Self::new(tau)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.tau
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Number of degree-`p` basis functions, `n - p - 1`.
    pub fn basis_count(&self, p: usize) -> usize {
        self.tau.len().saturating_sub(p + 1)
    }

    /// Interval `[tau_p, tau_{n-p-1}]` on which the degree-`p` basis sums to one.
    pub fn domain(&self, p: usize) -> Option<(f64, f64)> {
        let n = self.tau.len();
        (n >= 2 * p + 2).then(|| (self.tau[p], self.tau[n - p - 1]))
    }

    fn check(&self, i: usize, p: usize, u: f64) -> Result<()> {
        let n = self.tau.len();
        if n < p + 2 {
            return Err(Error::TooFewPoints {
                actual: n,
                required: p + 2,
            });
        }
        if i + p + 2 > n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: n as isize - p as isize - 2,
            });
        }
        let (lo, hi) = (self.tau[0], self.tau[n - 1]);
        if !(lo..=hi).contains(&u) {
            return Err(Error::OutOfSupport { u, lo, hi });
        }
        Ok(())
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Degree-0 indicator. Spans are half-open except at `close`, where the
/// non-empty span ending there is taken as right-closed.
fn indicator(tau: &[f64], i: usize, u: f64, close: f64) -> f64 {
    let inside = if u == close {
        tau[i] < u && u <= tau[i + 1]
    } else {
        tau[i] <= u && u < tau[i + 1]
    };
    if inside {
        1.0
    } else {
        0.0
    }
}

/// Right end of the degree-`p` domain, or the last knot when the vector
/// is too short to have one.
fn closing_knot(tau: &[f64], p: usize) -> f64 {
    let n = tau.len();
    if n >= 2 * p + 2 {
        tau[n - p - 1]
    } else {
        tau[n - 1]
    }
}

fn cox_de_boor(tau: &[f64], i: usize, p: usize, u: f64, close: f64) -> f64 {
    if p == 0 {
        return indicator(tau, i, u, close);
    }
    let left = ratio(u - tau[i], tau[i + p] - tau[i]);
    let right = ratio(tau[i + p + 1] - u, tau[i + p + 1] - tau[i + 1]);
    let mut value = 0.0;
    if left != 0.0 {
        value += left * cox_de_boor(tau, i, p - 1, u, close);
    }
    if right != 0.0 {
        value += right * cox_de_boor(tau, i + 1, p - 1, u, close);
    }
    value
}

/// `N_{i,p}(u)`, the `i`-th degree-`p` B-spline over `tau`.
///
/// Defined for `u` anywhere in `[tau_0, tau_{n-1}]`; zero outside its
/// support `[tau_i, tau_{i+p+1}]`.
pub fn bspline_basis(i: usize, p: usize, tau: &KnotVector, u: f64) -> Result<f64> {
    tau.check(i, p, u)?;
    let t = tau.as_slice();
    Ok(cox_de_boor(t, i, p, u, closing_knot(t, p)))
}

/// `d/du N_{i,p}(u) = p/(tau_{i+p} - tau_i) N_{i,p-1}(u) - p/(tau_{i+p+1} - tau_{i+1}) N_{i+1,p-1}(u)`.
pub fn bspline_basis_derivative(i: usize, p: usize, tau: &KnotVector, u: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::DegreeTooLow(p));
    }
    tau.check(i, p, u)?;
    let t = tau.as_slice();
    let pf = p as f64;
    let close = closing_knot(t, p);
    let left = ratio(pf, t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, u, close);
    let right = ratio(pf, t[i + p + 1] - t[i + 1]) * cox_de_boor(t, i + 1, p - 1, u, close);
    Ok(left - right)
}

/// `f(u) = sum_i P_i N_{i,p}(u)` over the curve's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct BSplineCurve {
    knots: KnotVector,
    degree: usize,
    control_points: Vec<f64>,
}

impl BSplineCurve {
    pub fn new(knots: KnotVector, degree: usize, control_points: Vec<f64>) -> Result<Self> {
        let expected = knots.basis_count(degree);
        if knots.domain(degree).is_none() {
            return Err(Error::TooFewPoints {
                actual: knots.len(),
                required: 2 * degree + 2,
            });
        }
        if control_points.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: control_points.len(),
            });
        }
        Ok(Self {
            knots,
            degree,
            control_points,
        })
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn control_points(&self) -> &[f64] {
        &self.control_points
    }

    pub fn domain(&self) -> (f64, f64) {
        self.knots.domain(self.degree).expect("validated in new")
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if (lo..=hi).contains(&u) {
            Ok(())
        } else {
            Err(Error::OutOfSupport { u, lo, hi })
        }
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        self.control_points
            .iter()
            .enumerate()
            .map(|(i, p)| Ok(p * bspline_basis(i, self.degree, &self.knots, u)?))
            .sum()
    }

    pub fn derivative(&self, u: f64) -> Result<f64> {
        self.check_domain(u)?;
        self.control_points
            .iter()
            .enumerate()
            .map(|(i, p)| Ok(p * bspline_basis_derivative(i, self.degree, &self.knots, u)?))
            .sum()
    }
}
