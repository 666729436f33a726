//! Polynomials in Bernstein form on `[0, T]`.
//!
//! Every trajectory, prediction and constraint polynomial in the planner is a
//! [`Bernstein`] curve. Control points are generic over [`ControlPoint`], so the
//! same code handles scalar constraint polynomials (`f64`) and planar
//! trajectories ([`Vec2`]).
//!
//! Evaluation and subdivision use de Casteljau's recursion. Products use the
//! binomial convolution formula, so the result of multiplying two curves is
//! again an exact Bernstein polynomial and its coefficient signs can serve as a
//! nonnegativity certificate.

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use nalgebra::{SVector, Vector2};
use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

/// Planar vector used throughout the crate.
pub type Vec2 = Vector2<f64>;

/// Scalar polynomial (constraint polynomials, certificates).
pub type ScalarPoly = Bernstein<f64>;

/// Planar trajectory.
pub type Curve2 = Bernstein<Vec2>;

/// Largest degree supported by the precomputed binomial table.
pub const MAX_DEGREE: usize = 40;

type Points<P> = SmallVec<[P; 8]>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BernsteinError {
    #[error("a Bernstein curve needs at least one control point")]
    Empty,
    #[error("horizon must be positive and finite, got {0}")]
    BadHorizon(f64),
    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("time {t} is outside [0, {horizon}]")]
    OutOfDomain { t: f64, horizon: f64 },
    #[error("breakpoints must be strictly increasing and lie inside (0, {horizon})")]
    BadBreakpoints { horizon: f64 },
}

/// Values that can serve as Bernstein control points.
pub trait ControlPoint:
    Copy + Debug + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
}

impl ControlPoint for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl<const D: usize> ControlPoint for SVector<f64, D> {
    fn zero() -> Self {
        SVector::zeros()
    }
}

const fn binomial_table() -> [[f64; MAX_DEGREE + 1]; MAX_DEGREE + 1] {
    let mut table = [[0.0; MAX_DEGREE + 1]; MAX_DEGREE + 1];
    let mut n = 0;
    while n <= MAX_DEGREE {
        table[n][0] = 1.0;
        let mut k = 1;
        while k <= n {
            table[n][k] = table[n - 1][k - 1] + if k < n { table[n - 1][k] } else { 0.0 };
            k += 1;
        }
        n += 1;
    }
    table
}

static BINOMIAL: [[f64; MAX_DEGREE + 1]; MAX_DEGREE + 1] = binomial_table();

/// `n choose k` as a float (exact for `n <= MAX_DEGREE`).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        BINOMIAL[n][k]
    }
}

/// A polynomial curve `sum_k p_k B_{k,n}(t / T)` for `t` in `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bernstein<P> {
    horizon: f64,
    #[serde(rename = "control_points")]
    points: Points<P>,
}

impl<P: ControlPoint> Bernstein<P> {
    pub fn new(horizon: f64, points: impl IntoIterator<Item = P>) -> Result<Self, BernsteinError> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(BernsteinError::BadHorizon(horizon));
        }
        let points: Points<P> = points.into_iter().collect();
        if points.is_empty() {
            return Err(BernsteinError::Empty);
        }
        if points.len() > MAX_DEGREE + 1 {
            return Err(BernsteinError::DegreeTooHigh(points.len() - 1));
        }
        Ok(Self { horizon, points })
    }

    /// Degree-0 curve holding `value` for the whole horizon.
    pub fn constant(value: P, horizon: f64) -> Self {
        assert!(horizon.is_finite() && horizon > 0.0, "horizon must be positive");
        Self::from_raw(horizon, smallvec::smallvec![value])
    }

    fn from_raw(horizon: f64, points: Points<P>) -> Self {
        debug_assert!(!points.is_empty());
        Self { horizon, points }
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn control_points(&self) -> &[P] {
        &self.points
    }

    pub fn first(&self) -> P {
        self.points[0]
    }

    pub fn last(&self) -> P {
        self.points[self.points.len() - 1]
    }

    /// Value at time `t`, which must lie in `[0, horizon]`.
    pub fn evaluate(&self, t: f64) -> Result<P, BernsteinError> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(BernsteinError::OutOfDomain { t, horizon: self.horizon });
        }
        Ok(self.at(t))
    }

    /// Value at time `t`, clamped into the domain.
    pub fn at(&self, t: f64) -> P {
        let s = (t / self.horizon).clamp(0.0, 1.0);
        if s == 0.0 {
            return self.first();
        }
        if s == 1.0 {
            return self.last();
        }
        de_casteljau(&self.points, s)
    }

    /// Exact derivative, one degree lower. A constant curve maps to zero.
    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::constant(P::zero(), self.horizon);
        }
        let scale = n as f64 / self.horizon;
        let points = self.points.windows(2).map(|w| (w[1] - w[0]) * scale).collect();
        Self::from_raw(self.horizon, points)
    }

    /// Same polynomial written with `by` extra degrees.
    pub fn elevate(&self, by: usize) -> Self {
        if by == 0 {
            return self.clone();
        }
        let n = self.degree();
        let m = n + by;
        assert!(m <= MAX_DEGREE, "degree elevation beyond {MAX_DEGREE}");
        let points = (0..=m)
            .map(|k| {
                let lo = k.saturating_sub(by);
                let hi = k.min(n);
                let mut acc = P::zero();
                for i in lo..=hi {
                    acc = acc + self.points[i] * (BINOMIAL[n][i] * BINOMIAL[by][k - i]);
                }
                acc * (1.0 / BINOMIAL[m][k])
            })
            .collect();
        Self::from_raw(self.horizon, points)
    }

    pub fn elevate_to(&self, degree: usize) -> Self {
        assert!(degree >= self.degree(), "cannot elevate degree {} down to {degree}", self.degree());
        self.elevate(degree - self.degree())
    }

    fn assert_same_horizon(&self, other_horizon: f64) {
        assert!(
            self.horizon == other_horizon,
            "Bernstein arithmetic across horizons {} and {other_horizon}",
            self.horizon
        );
    }

    fn zip_with(&self, other: &Self, f: impl Fn(P, P) -> P) -> Self {
        self.assert_same_horizon(other.horizon);
        let n = self.degree().max(other.degree());
        let a = self.elevate_to(n);
        let b = other.elevate_to(n);
        let points = a.points.iter().zip(b.points.iter()).map(|(&x, &y)| f(x, y)).collect();
        Self::from_raw(self.horizon, points)
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|p| p * factor)
    }

    /// Adds a constant to the curve.
    pub fn translate(&self, offset: P) -> Self {
        self.map(|p| p + offset)
    }

    /// Applies `f` to every control point. Exact for affine `f`, since the
    /// Bernstein basis is a partition of unity.
    pub fn map<Q: ControlPoint>(&self, f: impl Fn(P) -> Q) -> Bernstein<Q> {
        Bernstein::from_raw(self.horizon, self.points.iter().map(|&p| f(p)).collect())
    }

    /// Bernstein coefficients of `t -> f(self(t), other(t))` for bilinear `f`
    /// (products, dot products, 2D cross products).
    pub fn combine<Q: ControlPoint, R: ControlPoint>(
        &self,
        other: &Bernstein<Q>,
        f: impl Fn(P, Q) -> R,
    ) -> Bernstein<R> {
        self.assert_same_horizon(other.horizon);
        let m = self.degree();
        let n = other.degree();
        let d = m + n;
        assert!(d <= MAX_DEGREE, "product degree {d} beyond {MAX_DEGREE}");
        let mut points: Points<R> = smallvec::smallvec![R::zero(); d + 1];
        for (i, &a) in self.points.iter().enumerate() {
            let wa = BINOMIAL[m][i];
            for (j, &b) in other.points.iter().enumerate() {
                points[i + j] = points[i + j] + f(a, b) * (wa * BINOMIAL[n][j]);
            }
        }
        for (k, p) in points.iter_mut().enumerate() {
            *p = *p * (1.0 / BINOMIAL[d][k]);
        }
        Bernstein::from_raw(self.horizon, points)
    }

    /// Exact integral over `[0, T]`.
    pub fn integral(&self) -> P {
        let sum = self.points.iter().fold(P::zero(), |acc, &p| acc + p);
        sum * (self.horizon / (self.degree() + 1) as f64)
    }

    /// The antiderivative vanishing at `t = 0`.
    pub fn antiderivative(&self) -> Self {
        let step = self.horizon / (self.degree() + 1) as f64;
        let mut points: Points<P> = SmallVec::with_capacity(self.points.len() + 1);
        let mut acc = P::zero();
        points.push(acc);
        for &p in &self.points {
            acc = acc + p * step;
            points.push(acc);
        }
        Self::from_raw(self.horizon, points)
    }

    /// Subdivides at time `t` (strictly inside the horizon). Each piece is
    /// reparameterised on its own sub-horizon.
    pub fn split_at(&self, t: f64) -> Result<(Self, Self), BernsteinError> {
        if !(t > 0.0 && t < self.horizon) {
            return Err(BernsteinError::BadBreakpoints { horizon: self.horizon });
        }
        let s = t / self.horizon;
        let n = self.points.len();
        let mut work = self.points.clone();
        let mut left: Points<P> = SmallVec::with_capacity(n);
        let mut right: Points<P> = smallvec::smallvec![P::zero(); n];
        left.push(work[0]);
        right[n - 1] = work[n - 1];
        for level in 1..n {
            for k in 0..n - level {
                work[k] = work[k] * (1.0 - s) + work[k + 1] * s;
            }
            left.push(work[0]);
            right[n - 1 - level] = work[n - 1 - level];
        }
        Ok((Self::from_raw(t, left), Self::from_raw(self.horizon - t, right)))
    }

    /// Subdivides at every breakpoint, returning `breakpoints.len() + 1` pieces.
    pub fn split(&self, breakpoints: &[f64]) -> Result<Vec<Self>, BernsteinError> {
        let bad = BernsteinError::BadBreakpoints { horizon: self.horizon };
        let mut prev = 0.0;
        for &b in breakpoints {
            if !(b > prev && b < self.horizon) {
                return Err(bad);
            }
            prev = b;
        }
        let mut pieces = Vec::with_capacity(breakpoints.len() + 1);
        let mut rest = self.clone();
        let mut consumed = 0.0;
        for &b in breakpoints {
            let local = b - consumed;
            if !(local > 0.0 && local < rest.horizon) {
                return Err(bad);
            }
            let (left, right) = rest.split_at(local)?;
            pieces.push(left);
            rest = right;
            consumed = b;
        }
        pieces.push(rest);
        Ok(pieces)
    }
}

fn de_casteljau<P: ControlPoint>(points: &[P], s: f64) -> P {
    let mut work: SmallVec<[P; 16]> = points.iter().copied().collect();
    let n = work.len();
    for level in 1..n {
        for k in 0..n - level {
            work[k] = work[k] * (1.0 - s) + work[k + 1] * s;
        }
    }
    work[0]
}

impl<P: ControlPoint> Add for &Bernstein<P> {
    type Output = Bernstein<P>;

    fn add(self, rhs: Self) -> Bernstein<P> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<P: ControlPoint> Sub for &Bernstein<P> {
    type Output = Bernstein<P>;

    fn sub(self, rhs: Self) -> Bernstein<P> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Bernstein<f64> {
    /// Pointwise product.
    pub fn product(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    /// True iff every coefficient is `>= 0`. A sufficient (not necessary)
    /// certificate that the polynomial is nonnegative on the whole horizon.
    pub fn coefficients_nonnegative(&self) -> bool {
        self.points.iter().all(|&c| c >= 0.0)
    }

    pub fn min_coefficient(&self) -> f64 {
        self.points.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl<const D: usize> Bernstein<SVector<f64, D>> {
    pub fn dot(&self, other: &Self) -> Bernstein<f64> {
        self.combine(other, |a, b| a.dot(&b))
    }

    pub fn squared_norm(&self) -> Bernstein<f64> {
        self.dot(self)
    }

    /// Scales each point by the matching value of a scalar curve.
    pub fn scaled_by(&self, factor: &Bernstein<f64>) -> Self {
        self.combine(factor, |p, s| p * s)
    }

    pub fn component(&self, axis: usize) -> Bernstein<f64> {
        self.map(|p| p[axis])
    }
}

impl Bernstein<Vec2> {
    /// The 2D cross product `det([a(t); b(t)])`.
    pub fn cross(&self, other: &Self) -> Bernstein<f64> {
        self.combine(other, |a, b| a.x * b.y - a.y * b.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn constant_curve_evaluates_everywhere() {
        let c = Curve2::new(2.0, vec![v(1.0, 2.0); 4]).unwrap();
        for t in [0.0, 0.3, 1.0, 2.0] {
            assert_eq!(c.evaluate(t).unwrap(), v(1.0, 2.0));
        }
    }

    #[test]
    fn linear_midpoint() {
        let c = Curve2::new(1.0, [v(0.0, 0.0), v(1.0, 0.0)]).unwrap();
        assert!((c.evaluate(0.5).unwrap() - v(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_outside_domain_errors() {
        let c = ScalarPoly::new(1.0, [0.0, 1.0]).unwrap();
        assert!(matches!(c.evaluate(1.5), Err(BernsteinError::OutOfDomain { .. })));
        assert!(matches!(c.evaluate(-1e-9), Err(BernsteinError::OutOfDomain { .. })));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert_eq!(ScalarPoly::new(0.0, [1.0]), Err(BernsteinError::BadHorizon(0.0)));
        assert_eq!(ScalarPoly::new(1.0, []), Err(BernsteinError::Empty));
        assert!(ScalarPoly::new(f64::INFINITY, [1.0]).is_err());
    }

    #[test]
    fn derivative_of_line_and_constant() {
        let line = ScalarPoly::new(2.0, [0.0, 1.0]).unwrap();
        let d = line.derivative();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.control_points(), &[0.5]);
        let c = ScalarPoly::constant(3.0, 1.0).derivative();
        assert_eq!(c.control_points(), &[0.0]);
    }

    #[test]
    fn product_of_t_with_t() {
        let t = ScalarPoly::new(1.0, [0.0, 1.0]).unwrap();
        let tt = t.product(&t);
        assert_eq!(tt.control_points(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn product_with_one_is_identity() {
        let a = ScalarPoly::new(1.5, [0.3, -1.0, 2.0, 0.7]).unwrap();
        let one = ScalarPoly::constant(1.0, 1.5);
        let p = a.product(&one);
        assert_eq!(p.degree(), 3);
        for (x, y) in p.control_points().iter().zip(a.control_points()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    #[should_panic(expected = "across horizons")]
    fn mismatched_horizons_panic() {
        let a = ScalarPoly::new(1.0, [0.0, 1.0]).unwrap();
        let b = ScalarPoly::new(2.0, [0.0, 1.0]).unwrap();
        let _ = a.product(&b);
    }

    #[test]
    fn integrals() {
        assert_eq!(ScalarPoly::constant(3.0, 2.0).integral(), 6.0);
        assert_eq!(ScalarPoly::new(1.0, [0.0, 1.0]).unwrap().integral(), 0.5);
    }

    #[test]
    fn split_line_at_half() {
        let c = ScalarPoly::new(1.0, [0.0, 1.0]).unwrap();
        let pieces = c.split(&[0.5]).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].control_points(), &[0.0, 0.5]);
        assert_eq!(pieces[0].horizon(), 0.5);
        assert_eq!(pieces[1].control_points(), &[0.5, 1.0]);
        assert_eq!(pieces[1].horizon(), 0.5);
    }

    #[test]
    fn split_without_breakpoints_is_identity() {
        let c = ScalarPoly::new(1.0, [0.0, 3.0, 1.0]).unwrap();
        assert_eq!(c.split(&[]).unwrap(), vec![c]);
    }

    #[test]
    fn split_rejects_bad_breakpoints() {
        let c = ScalarPoly::new(1.0, [0.0, 1.0]).unwrap();
        assert!(c.split(&[0.6, 0.4]).is_err());
        assert!(c.split(&[0.0]).is_err());
        assert!(c.split(&[1.0]).is_err());
        assert!(c.split(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn nonnegativity_certificate() {
        assert!(ScalarPoly::new(1.0, [0.0, 0.2, 1.0]).unwrap().coefficients_nonnegative());
        // positive everywhere, yet not certified
        let p = ScalarPoly::new(1.0, [1.0, -0.1, 1.0]).unwrap();
        assert!(!p.coefficients_nonnegative());
        assert!((0..=100).all(|k| p.at(k as f64 / 100.0) > 0.0));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(30, 15), 155117520.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn cross_of_parallel_curves_vanishes() {
        let a = Curve2::new(1.0, [v(1.0, 2.0), v(2.0, 4.0)]).unwrap();
        let b = a.scale(3.0);
        assert!(a.cross(&b).control_points().iter().all(|c| c.abs() < 1e-12));
    }
}
