//! Tracking cost, integrated exactly from Bernstein coefficients.

use crate::bernstein::{Curve2, ScalarPoly};

/// `w_j * int |x'''|^2 dt`.
pub fn jerk_cost(primitive: &Curve2, jerk_weight: f64) -> f64 {
    let jerk = primitive.derivative().derivative().derivative();
    jerk_weight * jerk.squared_norm().integral()
}

/// `int (|x_c - x_q|^2 - d_des^2)^2 dt`.
pub fn distance_cost(primitive: &Curve2, target: &Curve2, d_des: f64) -> f64 {
    let squared = (primitive - target).squared_norm();
    let err = &squared - &ScalarPoly::constant(d_des * d_des, squared.horizon());
    err.product(&err).integral()
}

pub fn tracking_cost(primitive: &Curve2, target: &Curve2, jerk_weight: f64, d_des: f64) -> f64 {
    jerk_cost(primitive, jerk_weight) + distance_cost(primitive, target, d_des)
}

/// Index of the smallest cost; ties go to the lowest index.
pub fn argmin_cost(costs: impl IntoIterator<Item = (usize, f64)>) -> Option<(usize, f64)> {
    costs.into_iter().fold(None, |best, (i, c)| match best {
        Some((bi, bc)) if bc < c || (bc == c && bi < i) => Some((bi, bc)),
        _ => Some((i, c)),
    })
}

/// The cheapest of `passing` (index into the slice).
pub fn select_best(passing: &[Curve2], target: &Curve2, jerk_weight: f64, d_des: f64) -> Option<usize> {
    argmin_cost(passing.iter().enumerate().map(|(i, p)| (i, tracking_cost(p, target, jerk_weight, d_des)))).map(|b| b.0)
}
