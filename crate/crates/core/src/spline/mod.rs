//! Cubic B-spline machinery: the basis recursion and interpolating splines.

mod basis;
mod cubic;

pub use basis::{bspline_basis, bspline_basis_derivative, BSplineCurve, KnotVector};
pub use cubic::{fit_interpolating_spline, BoundaryCondition, CubicSplineModel};

/// Value of the spline at `u`.
pub fn spline_eval(model: &CubicSplineModel, u: f64) -> crate::Result<f64> {
    model.eval(u)
}

/// First derivative of the spline at `u`.
pub fn spline_derivative_eval(model: &CubicSplineModel, u: f64) -> crate::Result<f64> {
    model.derivative(u)
}
