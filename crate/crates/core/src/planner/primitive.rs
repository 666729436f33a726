//! Terminal-point sampling and the minimum-effort cubic primitive.

use rand::Rng;
use rand_distr::{Distribution, Uniform};

use super::PlannerConfig;
use crate::bernstein::{Curve2, Vec2};

/// Terminal points around the target's predicted end position, drawn
/// uniformly in radius and azimuth.
pub fn sample_terminal_points<R: Rng + ?Sized>(target_prediction: &Curve2, config: &PlannerConfig, rng: &mut R) -> Vec<Vec2> {
    let center = target_prediction.last();
    let radius = Uniform::new_inclusive(config.annulus_min, config.annulus_max).expect("ordered annulus");
    let azimuth = Uniform::new_inclusive(config.azimuth_min, config.azimuth_max).expect("ordered azimuth");
    (0..config.sample_count)
        .map(|_| {
            let r = radius.sample(rng);
            let psi = azimuth.sample(rng);
            center + Vec2::new(r * psi.cos(), r * psi.sin())
        })
        .collect()
}

/// Initial acceleration of the minimum-effort double-integrator path from
/// `(x0, v0)` to `xf` with free terminal velocity. The optimal jerk is
/// `-a0 / T`, so the acceleration ramps linearly to zero at `T`.
pub fn initial_acceleration(x0: &Vec2, v0: &Vec2, xf: &Vec2, horizon: f64) -> Vec2 {
    (xf - x0 - v0 * horizon) * (3.0 / (horizon * horizon))
}

/// The minimiser of `(1/T) * int |u|^2` as a cubic Bernstein curve.
pub fn solve_primitive(x0: &Vec2, v0: &Vec2, xf: &Vec2, horizon: f64) -> Curve2 {
    let a0 = initial_acceleration(x0, v0, xf, horizon);
    let p1 = x0 + v0 * (horizon / 3.0);
    let p2 = a0 * (horizon * horizon / 6.0) + p1 * 2.0 - x0;
    Curve2::new(horizon, [*x0, p1, p2, *xf]).expect("positive horizon")
}

/// Optimal value `(1/T) * int |u|^2 = |a0|^2 / 3`.
pub fn primitive_effort(x0: &Vec2, v0: &Vec2, xf: &Vec2, horizon: f64) -> f64 {
    initial_acceleration(x0, v0, xf, horizon).norm_squared() / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn rest_to_rest_is_constant() {
        let c = solve_primitive(&v(1.0, 2.0), &Vec2::zeros(), &v(1.0, 2.0), 1.5);
        assert!(c.control_points().iter().all(|p| (p - v(1.0, 2.0)).norm() < 1e-15));
        assert_eq!(primitive_effort(&v(1.0, 2.0), &Vec2::zeros(), &v(1.0, 2.0), 1.5), 0.0);
    }

    #[test]
    fn boundary_conditions_and_zero_terminal_acceleration() {
        let (x0, v0, xf) = (v(0.3, -1.0), v(1.5, 0.7), v(2.0, 0.4));
        let c = solve_primitive(&x0, &v0, &xf, 1.2);
        assert!((c.at(0.0) - x0).norm() < 1e-12);
        assert!((c.at(1.2) - xf).norm() < 1e-12);
        assert!((c.derivative().at(0.0) - v0).norm() < 1e-12);
        assert!(c.derivative().derivative().at(1.2).norm() < 1e-12);
    }

    #[test]
    fn degenerate_annulus_is_a_point() {
        let cfg = PlannerConfig {
            sample_count: 5,
            annulus_min: 1.0,
            annulus_max: 1.0,
            azimuth_min: 0.0,
            azimuth_max: 0.0,
            ..Default::default()
        };
        let target = Curve2::constant(Vec2::zeros(), 1.5);
        let pts = sample_terminal_points(&target, &cfg, &mut rand_chacha::ChaCha8Rng::seed_from_u64(1));
        assert_eq!(pts, vec![v(1.0, 0.0); 5]);
    }
}
