//! Interpolating cubic splines in per-segment power form.
//!
//! The fit solves the tridiagonal system for the second derivatives
//! (moments) `M_i` at the knots, then converts each segment to
//! `c0 + c1 s + c2 s^2 + c3 s^3` with `s = u - x_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::basis::{BSplineCurve, KnotVector};
use crate::error::{Error, Result};

/// End condition of an interpolating cubic spline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    /// Zero first derivative at both ends.
    Clamped,
    /// Zero second derivative at both ends.
    Natural,
    /// Third derivative continuous at the second and penultimate knots.
    NotAKnot,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 3] = [
        BoundaryCondition::Clamped,
        BoundaryCondition::Natural,
        BoundaryCondition::NotAKnot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Clamped => "clamped",
            BoundaryCondition::Natural => "natural",
            BoundaryCondition::NotAKnot => "not-a-knot",
        }
    }

    /// Minimum number of interpolation points.
    pub fn min_points(self) -> usize {
        match self {
            BoundaryCondition::NotAKnot => 4,
            _ => 2,
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "clamped" => Ok(BoundaryCondition::Clamped),
            "natural" => Ok(BoundaryCondition::Natural),
            "not-a-knot" => Ok(BoundaryCondition::NotAKnot),
            other => Err(format!(
                "unknown boundary condition {other:?} (expected clamped, natural or not-a-knot)"
            )),
        }
    }
}

/// Piecewise cubic interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSplineModel {
    knots: Vec<f64>,
    values: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
    boundary: BoundaryCondition,
}

/// Thomas algorithm. `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularSystem);
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem);
        }
        c[i] = if i + 1 < n { sup[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}

/// Second derivatives at the knots for the given end condition.
fn moments(h: &[f64], slope: &[f64], boundary: BoundaryCondition) -> Result<Vec<f64>> {
    let m = h.len() + 1;
    let interior_rhs = |i: usize| 6.0 * (slope[i] - slope[i - 1]);
    match boundary {
        BoundaryCondition::Natural | BoundaryCondition::Clamped => {
            let mut sub = vec![0.0; m];
            let mut diag = vec![0.0; m];
            let mut sup = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 1..m - 1 {
                sub[i] = h[i - 1];
                diag[i] = 2.0 * (h[i - 1] + h[i]);
                sup[i] = h[i];
                rhs[i] = interior_rhs(i);
            }
            if boundary == BoundaryCondition::Natural {
                diag[0] = 1.0;
                diag[m - 1] = 1.0;
            } else {
                // S'(x_0) = 0 and S'(x_{m-1}) = 0
                diag[0] = 2.0 * h[0];
                sup[0] = h[0];
                rhs[0] = 6.0 * slope[0];
                sub[m - 1] = h[m - 2];
                diag[m - 1] = 2.0 * h[m - 2];
                rhs[m - 1] = -6.0 * slope[m - 2];
            }
            solve_tridiagonal(&sub, &diag, &sup, &rhs)
        }
        BoundaryCondition::NotAKnot => {
            // Unknowns M_1..M_{m-2}; M_0 and M_{m-1} follow from the
            // third-derivative continuity at x_1 and x_{m-2}.
            let k = m - 2;
            let mut sub = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut sup = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for r in 0..k {
                let i = r + 1;
                sub[r] = h[i - 1];
                diag[r] = 2.0 * (h[i - 1] + h[i]);
                sup[r] = h[i];
                rhs[r] = interior_rhs(i);
            }
            let (h0, h1) = (h[0], h[1]);
            let (ha, hb) = (h[m - 3], h[m - 2]);
            if k == 2 {
                // both end constraints touch the same two unknowns
                diag[0] = (h0 + h1) * (h0 + 2.0 * h1);
                sup[0] = h1 * h1 - h0 * h0;
                rhs[0] *= h1;
                sub[1] = ha * ha - hb * hb;
                diag[1] = (ha + hb) * (2.0 * ha + hb);
                rhs[1] *= ha;
            } else {
                diag[0] = (h0 + h1) * (h0 + 2.0 * h1) / h1;
                sup[0] = (h1 * h1 - h0 * h0) / h1;
                sub[k - 1] = (ha * ha - hb * hb) / ha;
                diag[k - 1] = (ha + hb) * (2.0 * ha + hb) / ha;
            }
            let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
            let first = ((h0 + h1) * inner[0] - h0 * inner[1]) / h1;
            let last = ((ha + hb) * inner[k - 1] - hb * inner[k - 2]) / ha;
            let mut all = Vec::with_capacity(m);
            all.push(first);
            all.extend_from_slice(&inner);
            all.push(last);
            Ok(all)
        }
    }
}

/// Fits the cubic spline through `(x_i, y_i)` under `boundary`.
pub fn fit_interpolating_spline(
    x: &[f64],
    y: &[f64],
    boundary: BoundaryCondition,
) -> Result<CubicSplineModel> {
    let m = x.len();
    if y.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            actual: y.len(),
        });
    }
    let required = boundary.min_points();
    if m < required {
        return Err(Error::TooFewPoints {
            actual: m,
            required,
        });
    }
    if let Some(index) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { index: index % m });
    }
    if let Some(i) = x.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotoneKnots(i + 1));
    }

    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = y
        .windows(2)
        .zip(&h)
        .map(|(w, hi)| (w[1] - w[0]) / hi)
        .collect();
    let mm = moments(&h, &slope, boundary)?;
    let coeffs = (0..m - 1)
        .map(|i| {
            [
                y[i],
                slope[i] - h[i] * (2.0 * mm[i] + mm[i + 1]) / 6.0,
                mm[i] / 2.0,
                (mm[i + 1] - mm[i]) / (6.0 * h[i]),
            ]
        })
        .collect();
    Ok(CubicSplineModel {
        knots: x.to_vec(),
        values: y.to_vec(),
        coeffs,
        boundary,
    })
}

impl CubicSplineModel {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Ordinates the spline interpolates.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `[c0, c1, c2, c3]` per segment, in the local variable `s = u - knots[i]`.
    pub fn segment_coeffs(&self) -> &[[f64; 4]] {
        &self.coeffs
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.boundary
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Segment index and local offset for `u`; the right end belongs to
    /// the last segment.
    fn locate(&self, u: f64) -> Result<(usize, f64)> {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&u) {
            return Err(Error::OutOfSupport { u, lo, hi });
        }
        let seg = self.knots[1..self.knots.len() - 1].partition_point(|&k| k <= u);
        Ok((seg, u - self.knots[seg]))
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if u == self.knots[self.knots.len() - 1] {
            return Ok(self.values[self.values.len() - 1]);
        }
        let (seg, s) = self.locate(u)?;
        let [c0, c1, c2, c3] = self.coeffs[seg];
        Ok(c0 + s * (c1 + s * (c2 + s * c3)))
    }

    pub fn derivative(&self, u: f64) -> Result<f64> {
        let (seg, s) = self.locate(u)?;
        let [_, c1, c2, c3] = self.coeffs[seg];
        Ok(c1 + s * (2.0 * c2 + s * 3.0 * c3))
    }

    pub fn second_derivative(&self, u: f64) -> Result<f64> {
        let (seg, s) = self.locate(u)?;
        let [_, _, c2, c3] = self.coeffs[seg];
        Ok(2.0 * c2 + 6.0 * c3 * s)
    }

    /// Piecewise constant third derivative, one value per segment.
    pub fn third_derivatives(&self) -> impl Iterator<Item = f64> + '_ {
        self.coeffs.iter().map(|c| 6.0 * c[3])
    }

    /// Same curve as a clamped cubic B-spline `sum_i P_i N_{i,3}(u)`.
    ///
    /// Each control point is the blossom of the segment polynomial at three
    /// consecutive knots, which reproduces the piecewise cubic exactly.
    pub fn to_bspline(&self) -> Result<BSplineCurve> {
        let tau = KnotVector::clamped(&self.knots, 3)?;
        let t = tau.as_slice();
        let segs = self.coeffs.len();
        let control = (0..tau.basis_count(3))
            .map(|i| {
                // any segment under the support of N_{i,3} yields the same
                // blossom; take the one starting at or after t[i+1]
                let seg = (i.saturating_sub(2)).min(segs - 1);
                let origin = self.knots[seg];
                let [c0, c1, c2, c3] = self.coeffs[seg];
                let (a, b, c) = (t[i + 1] - origin, t[i + 2] - origin, t[i + 3] - origin);
                c0 + c1 * (a + b + c) / 3.0 + c2 * (a * b + a * c + b * c) / 3.0 + c3 * a * b * c
            })
            .collect();
        BSplineCurve::new(tau, 3, control)
    }
}
