//! Trajectory prediction for the target and dynamic obstacles.
//!
//! All planners in a replan cycle must be fed the same prediction; the cells
//! are only mutually consistent when every agent anchors them to one curve.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bernstein::{Curve2, Vec2};

/// Position, velocity and radius of a moving disc at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MovingObjectState {
    pub position: Vec2,
    pub velocity: Vec2,
    pub radius: f64,
}

impl MovingObjectState {
    pub fn new(position: Vec2, velocity: Vec2, radius: f64) -> Self {
        Self { position, velocity, radius }
    }

    pub fn is_valid(&self) -> bool {
        self.radius > 0.0
            && self.radius.is_finite()
            && self.position.iter().all(|c| c.is_finite())
            && self.velocity.iter().all(|c| c.is_finite())
    }

    /// Copy with Gaussian noise of standard deviation `sigma` added to the
    /// position and velocity measurements. `sigma == 0` returns `self`.
    pub fn with_noise<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> Self {
        if sigma <= 0.0 {
            return *self;
        }
        let normal = Normal::new(0.0, sigma).expect("finite sigma");
        let mut noisy = *self;
        noisy.position += Vec2::new(normal.sample(rng), normal.sample(rng));
        noisy.velocity += Vec2::new(normal.sample(rng), normal.sample(rng));
        noisy
    }
}

/// `position + velocity * t` on `[0, horizon]`, written with `degree`
/// control points beyond the first (at least 1).
pub fn predict_constant_velocity(state: &MovingObjectState, horizon: f64, degree: usize) -> Curve2 {
    let line = Curve2::new(horizon, [state.position, state.position + state.velocity * horizon])
        .expect("positive horizon");
    line.elevate_to(degree.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityEstimate {
    pub velocity: Vec2,
    /// False when there were too few distinct samples to fit a slope.
    pub reliable: bool,
}

/// Least-squares slope of position against time over the last `window`
/// samples of `history` (`(time, position)` pairs in time order).
pub fn estimate_velocity(history: &[(f64, Vec2)], window: usize) -> VelocityEstimate {
    let unreliable = VelocityEstimate { velocity: Vec2::zeros(), reliable: false };
    let start = history.len().saturating_sub(window.max(2));
    let samples = &history[start..];
    if samples.len() < 2 {
        return unreliable;
    }
    let n = samples.len() as f64;
    let t_mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let p_mean = samples.iter().fold(Vec2::zeros(), |acc, s| acc + s.1) / n;
    let mut stt = 0.0;
    let mut stp = Vec2::zeros();
    for (t, p) in samples {
        let dt = t - t_mean;
        stt += dt * dt;
        stp += (p - p_mean) * dt;
    }
    if stt <= 0.0 {
        return unreliable;
    }
    VelocityEstimate { velocity: stp / stt, reliable: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn zero_velocity_gives_constant_curve() {
        let s = MovingObjectState::new(v(1.0, -2.0), Vec2::zeros(), 0.1);
        let c = predict_constant_velocity(&s, 1.5, 3);
        assert_eq!(c.degree(), 3);
        assert!(c.control_points().iter().all(|p| *p == v(1.0, -2.0)));
    }

    #[test]
    fn endpoint_after_horizon() {
        let s = MovingObjectState::new(v(0.0, 0.0), v(1.0, 0.0), 0.1);
        let c = predict_constant_velocity(&s, 2.0, 3);
        assert_eq!(c.first(), v(0.0, 0.0));
        assert!((c.last() - v(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn two_sample_velocity() {
        let e = estimate_velocity(&[(0.0, v(0.0, 0.0)), (1.0, v(1.0, 1.0))], 10);
        assert!(e.reliable);
        assert!((e.velocity - v(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn stationary_and_short_histories() {
        let e = estimate_velocity(&[(0.0, v(2.0, 2.0)), (0.5, v(2.0, 2.0)), (1.0, v(2.0, 2.0))], 3);
        assert!(e.reliable);
        assert_eq!(e.velocity, Vec2::zeros());
        let e = estimate_velocity(&[(0.0, v(2.0, 2.0))], 3);
        assert!(!e.reliable);
        assert_eq!(e.velocity, Vec2::zeros());
        let e = estimate_velocity(&[(1.0, v(0.0, 0.0)), (1.0, v(1.0, 0.0))], 3);
        assert!(!e.reliable);
    }

    #[test]
    fn window_uses_most_recent_samples() {
        let mut h: Vec<(f64, Vec2)> = (0..5).map(|k| (k as f64, v(0.0, 0.0))).collect();
        h.extend((5..10).map(|k| (k as f64, v(2.0 * (k - 4) as f64, 0.0))));
        let e = estimate_velocity(&h, 5);
        assert!((e.velocity - v(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn noise_is_seeded_and_zero_sigma_is_exact() {
        let s = MovingObjectState::new(v(1.0, 1.0), v(0.5, 0.0), 0.1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        assert_eq!(s.with_noise(0.0, &mut rng), s);
        let a = s.with_noise(0.1, &mut rand_chacha::ChaCha8Rng::seed_from_u64(9));
        let b = s.with_noise(0.1, &mut rand_chacha::ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_ne!(a, s);
    }
}
