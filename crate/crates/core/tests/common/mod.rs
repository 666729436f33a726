//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's numerics except to build inputs.
#![allow(dead_code)]

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vistrack::bernstein::{Curve2, Vec2};
use vistrack::cells::WorldAgent;

pub const R_C: f64 = 0.075;

pub fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Power-basis coefficients `c_k` (in `s = t / T`) of a Bernstein curve:
/// `c_k = C(n,k) sum_i (-1)^(k-i) C(k,i) p_i`.
pub fn power_coefficients(points: &[Vec2]) -> Vec<Vec2> {
    let n = points.len() - 1;
    let binom = |a: usize, b: usize| -> f64 { (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64) };
    (0..=n)
        .map(|k| {
            let mut c = Vec2::zeros();
            for (i, p) in points.iter().enumerate().take(k + 1) {
                let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
                c += p * (sign * binom(k, i));
            }
            c * binom(n, k)
        })
        .collect()
}

/// `order`-th time derivative of a power-basis curve at `t`, by Horner.
pub fn power_eval(coeffs: &[Vec2], horizon: f64, t: f64, order: usize) -> Vec2 {
    let s = t / horizon;
    let falling = |k: usize| (0..order).fold(1.0, |acc, j| acc * (k - j) as f64);
    let scale = horizon.powi(-(order as i32));
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .rev()
        .fold(Vec2::zeros(), |acc, (k, c)| acc * s + c * falling(k))
        * scale
}

/// Bernstein curve evaluated through its power-basis expansion.
pub fn horner_eval(points: &[Vec2], horizon: f64, t: f64) -> Vec2 {
    power_eval(&power_coefficients(points), horizon, t, 0)
}

pub fn horner_scalar(coeffs: &[f64], horizon: f64, t: f64) -> f64 {
    let pts: Vec<Vec2> = coeffs.iter().map(|&c| v(c, 0.0)).collect();
    horner_eval(&pts, horizon, t).x
}

/// Adaptive Simpson quadrature to relative tolerance `rel` (measured
/// against the first whole-interval estimate).
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    let eps = rel * whole.abs().max(f64::MIN_POSITIVE);
    rec(f, a, b, fa, fm, fb, whole, eps, 30)
}

/// Central finite difference of a vector function.
pub fn finite_difference(f: &dyn Fn(f64) -> Vec2, t: f64, h: f64) -> Vec2 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Minimum-effort double-integrator transcription with `n` piecewise
/// constant controls, solved as a minimum-norm problem through the
/// pseudo-inverse. Returns `(cost, controls)` with the cost `(1/T) int |u|^2`.
pub fn transcription_effort(x0: &Vec2, v0: &Vec2, xf: &Vec2, horizon: f64, n: usize) -> (f64, Vec<Vec2>) {
    let dt = horizon / n as f64;
    // x(T) = x0 + v0 T + sum_k u_k * w_k  with w_k the effect of a unit
    // acceleration held over [t_k, t_k + dt]
    let mut a = DMatrix::<f64>::zeros(2, 2 * n);
    for k in 0..n {
        let tk = k as f64 * dt;
        let w = 0.5 * dt * dt + dt * (horizon - tk - dt);
        a[(0, 2 * k)] = w;
        a[(1, 2 * k + 1)] = w;
    }
    let rhs = xf - x0 - v0 * horizon;
    let b = DVector::from_vec(vec![rhs.x, rhs.y]);
    let u = a.clone().pseudo_inverse(1e-14).expect("pseudo-inverse") * b;
    let controls: Vec<Vec2> = (0..n).map(|k| v(u[2 * k], u[2 * k + 1])).collect();
    let cost = controls.iter().map(|c| c.norm_squared() * dt).sum::<f64>() / horizon;
    (cost, controls)
}

/// Simulates the transcription controls and returns the terminal position.
pub fn integrate_controls(x0: &Vec2, v0: &Vec2, controls: &[Vec2], horizon: f64) -> Vec2 {
    let dt = horizon / controls.len() as f64;
    let (mut x, mut vel) = (*x0, *v0);
    for u in controls {
        x += vel * dt + u * (0.5 * dt * dt);
        vel += u * dt;
    }
    x
}

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Critical KS value at significance 0.001 for `n` samples.
pub fn ks_critical_001(n: usize) -> f64 {
    1.949 / (n as f64).sqrt()
}

/// Distance from `p` to the segment `a b` by a coarse scan over the segment
/// parameter followed by golden-section refinement of the best bracket.
pub fn segment_distance_scan(p: &Vec2, a: &Vec2, b: &Vec2, coarse: usize) -> f64 {
    let d = |e: f64| (a + (b - a) * e - p).norm();
    let (mut best, mut best_k) = (f64::INFINITY, 0);
    for k in 0..=coarse {
        let dk = d(k as f64 / coarse as f64);
        if dk < best {
            best = dk;
            best_k = k;
        }
    }
    let mut lo = (best_k.saturating_sub(1)) as f64 / coarse as f64;
    let mut hi = ((best_k + 1).min(coarse)) as f64 / coarse as f64;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if d(m1) < d(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    best.min(d(0.5 * (lo + hi)))
}

/// Random point at distance in `[r0, r1]` around `c`.
pub fn around(rng: &mut ChaCha8Rng, c: Vec2, r0: f64, r1: f64) -> Vec2 {
    let r = rng.random_range(r0..r1);
    let a = rng.random_range(0.0..TAU);
    c + v(r * a.cos(), r * a.sin())
}

pub fn random_vec(rng: &mut ChaCha8Rng, scale: f64) -> Vec2 {
    v(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

/// Constant-velocity target prediction written as a cubic.
pub fn random_target(rng: &mut ChaCha8Rng, horizon: f64) -> Curve2 {
    let q0 = random_vec(rng, 1.0);
    let vq = random_vec(rng, 1.0);
    Curve2::new(horizon, [q0, q0 + vq * horizon]).unwrap().elevate_to(3)
}

pub fn agent(id: usize, position: Vec2) -> WorldAgent {
    WorldAgent { id, position, velocity: Vec2::zeros(), radius: R_C }
}

/// The trajectory that keeps `agent`'s offset to the predicted target.
pub fn translated(target: &Curve2, agent: &WorldAgent) -> Curve2 {
    target.translate(agent.position - target.first())
}

/// `base` with every control point but the first moved by up to `scale`.
pub fn perturbed(rng: &mut ChaCha8Rng, base: &Curve2, scale: f64) -> Curve2 {
    let pts: Vec<Vec2> = base
        .control_points()
        .iter()
        .enumerate()
        .map(|(k, p)| if k == 0 { *p } else { p + random_vec(rng, scale) })
        .collect();
    Curve2::new(base.horizon(), pts).unwrap()
}

/// `n + 1` evenly spaced times on `[0, horizon]`.
pub fn times(horizon: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| horizon * k as f64 / n as f64)
}
