//! Random benchmark scenarios: a target (and optionally moving obstacles)
//! wandering between random waypoints at capped speed, with the agents
//! starting spread around the target.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AgentSpec, MovingDisc, Scenario, Script, MAX_SEED, SCENARIO_VERSION};
use crate::bernstein::Vec2;
use crate::geom::Aabb;
use crate::planner::PlannerConfig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("no valid initial configuration after {0} attempts")]
    Initialization(usize),
}

const ATTEMPTS: usize = 200;
/// Quiet time appended after the scripts stop.
const SETTLE: f64 = 2.0;
const RADIUS: f64 = 0.075;

/// Obstacle-free runs with one target and several trackers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmptySpaceParams {
    pub agents: usize,
    pub annulus: (f64, f64),
    pub target_speed: f64,
    /// Trackers lag an accelerating target by about `accel * horizon / 3`,
    /// so this bounds how far they drift inside their cells.
    pub target_accel: f64,
    /// Time the target keeps moving.
    pub duration: f64,
    /// Side of the square the target moves in.
    pub arena: f64,
    pub planner: PlannerConfig,
}

impl Default for EmptySpaceParams {
    fn default() -> Self {
        Self { agents: 3, annulus: (0.4, 1.2), target_speed: 1.0, target_accel: 0.5, duration: 30.0, arena: 6.0, planner: PlannerConfig::default() }
    }
}

/// Runs among moving obstacles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicParams {
    pub agents: usize,
    pub obstacles: usize,
    /// Speed cap shared by the target and the obstacles.
    pub speed: f64,
    pub accel: f64,
    pub duration: f64,
    pub arena: f64,
    /// Minimum gap kept between obstacle and target surfaces; the default
    /// matches the inner sampling radius, so obstacles stay out of the
    /// tracking ring's inside.
    pub target_margin: f64,
    pub planner: PlannerConfig,
}

impl Default for DynamicParams {
    fn default() -> Self {
        Self {
            agents: 3,
            obstacles: 10,
            speed: 0.5,
            accel: 0.25,
            duration: 40.0,
            arena: 6.0,
            target_margin: 0.3,
            planner: PlannerConfig::default(),
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, arena: f64) -> Vec2 {
    let h = 0.5 * arena;
    Vec2::new(rng.random_range(-h..h), rng.random_range(-h..h))
}

fn clamp_norm(v: Vec2, cap: f64) -> Vec2 {
    let n = v.norm();
    if n > cap {
        v * (cap / n)
    } else {
        v
    }
}

/// Motion limits of a scripted disc.
#[derive(Debug, Clone, Copy)]
struct Motion {
    speed: f64,
    accel: f64,
    period: f64,
}

/// Something to keep away from while wandering.
struct Avoid<'a> {
    script: &'a Script,
    /// Distance under which the repulsion starts.
    reach: f64,
}

/// Random tour between waypoints with capped speed and acceleration. The
/// velocity is held for one `period` at a time, so the path is piecewise
/// linear with a row per period; it moves until `duration` and then brakes
/// to a stop.
fn wander(rng: &mut ChaCha8Rng, start: Vec2, arena: f64, m: Motion, duration: f64, avoid: Option<&Avoid>) -> Vec<[f64; 3]> {
    let mut rows = vec![[0.0, start.x, start.y]];
    let mut p = start;
    let mut v = Vec2::zeros();
    let mut goal = random_point(rng, arena);
    let mut cruise = m.speed * rng.random_range(0.5..=1.0);
    let dv_max = m.accel * m.period;
    let mut k = 0u64;
    loop {
        let t = k as f64 * m.period;
        let moving = t < duration;
        if !moving && v.norm() == 0.0 {
            break;
        }
        let mut desired = Vec2::zeros();
        if moving {
            if (goal - p).norm() < 0.3 {
                goal = random_point(rng, arena);
                cruise = m.speed * rng.random_range(0.5..=1.0);
            }
            desired = (goal - p).normalize() * cruise;
            if let Some(a) = avoid {
                let away = p - a.script.state(t).0;
                let d = away.norm();
                if d < a.reach && d > 0.0 {
                    desired += away / d * (2.0 * m.speed * (a.reach - d) / a.reach);
                }
            }
            desired = clamp_norm(desired, m.speed);
        }
        v += clamp_norm(desired - v, dv_max);
        if !moving && v.norm() < 1e-12 {
            v = Vec2::zeros();
        }
        p += v * m.period;
        k += 1;
        rows.push([k as f64 * m.period, p.x, p.y]);
    }
    rows
}

/// Smallest distance between two scripts over `[0, until]`, sampled every `dt`.
fn min_separation(a: &Script, b: &Script, until: f64, dt: f64) -> f64 {
    let n = (until / dt).ceil() as usize;
    (0..=n)
        .map(|k| {
            let t = k as f64 * dt;
            (a.state(t).0 - b.state(t).0).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Agents evenly spread (with jitter) on a circle of radius `r` around `c`.
fn ring(rng: &mut ChaCha8Rng, c: Vec2, n: usize, r: f64) -> Vec<AgentSpec> {
    let offset = rng.random_range(0.0..TAU);
    (0..n)
        .map(|k| {
            let a = offset + TAU * k as f64 / n as f64 + rng.random_range(-0.15..0.15);
            let rr = r * rng.random_range(0.9..1.1);
            AgentSpec { position: c + Vec2::new(a.cos(), a.sin()) * rr, radius: RADIUS }
        })
        .collect()
}

fn bounds_for(arena: f64, d_max: f64) -> Aabb {
    let h = 0.5 * arena + d_max + 0.5;
    Aabb { min: Vec2::new(-h, -h), max: Vec2::new(h, h) }
}

/// Empty-space scenario.
pub fn empty_space_scenario(p: &EmptySpaceParams, seed: u64) -> Result<Scenario, GeneratorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seed = seed & MAX_SEED;
    let planner = PlannerConfig { annulus_min: p.annulus.0, annulus_max: p.annulus.1, seed, ..p.planner.clone() };
    let period = 0.1;
    for _ in 0..ATTEMPTS {
        let start = random_point(&mut rng, p.arena);
        let motion = Motion { speed: p.target_speed, accel: p.target_accel, period };
        let target = Script::Waypoints { waypoints: wander(&mut rng, start, p.arena, motion, p.duration, None) };
        let agents = ring(&mut rng, start, p.agents, planner.d_des());
        let scenario = Scenario {
            version: SCENARIO_VERSION,
            name: format!("empty-n{}-{:.1}-{:.1}-s{seed}", p.agents, p.annulus.0, p.annulus.1),
            duration: p.duration + SETTLE,
            tick: 0.01,
            replan_period: period,
            seed,
            measurement_noise: 0.0,
            bounds: bounds_for(p.arena, planner.d_max()),
            static_obstacles: vec![],
            dynamic_obstacles: vec![],
            target: MovingDisc { radius: RADIUS, script: target },
            agents,
            planner: planner.clone(),
        };
        if scenario.validate().is_ok() {
            return Ok(scenario);
        }
    }
    Err(GeneratorError::Initialization(ATTEMPTS))
}

/// Moving-obstacle scenario.
pub fn dynamic_obstacle_scenario(p: &DynamicParams, seed: u64) -> Result<Scenario, GeneratorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seed = seed & MAX_SEED;
    let planner = PlannerConfig { seed, ..p.planner.clone() };
    let period = 0.1;
    let clearance = 2.0 * RADIUS + p.target_margin;
    'attempt: for _ in 0..ATTEMPTS {
        let start = random_point(&mut rng, p.arena);
        let motion = Motion { speed: p.speed, accel: p.accel, period };
        let target = Script::Waypoints { waypoints: wander(&mut rng, start, p.arena, motion, p.duration, None) };
        let agents = ring(&mut rng, start, p.agents, planner.d_des());
        let avoid = Avoid { script: &target, reach: clearance + 0.6 };
        let until = p.duration + 10.0;
        let mut obstacles = Vec::with_capacity(p.obstacles);
        for _ in 0..p.obstacles {
            let script = (0..ATTEMPTS).find_map(|_| {
                // start well clear of the trackers and their lines of sight
                let o = random_point(&mut rng, p.arena);
                if (o - start).norm() <= planner.d_max() + 0.3 {
                    return None;
                }
                let s = Script::Waypoints { waypoints: wander(&mut rng, o, p.arena, motion, p.duration, Some(&avoid)) };
                (min_separation(&s, &target, until, 0.02) >= clearance).then_some(s)
            });
            match script {
                Some(script) => obstacles.push(MovingDisc { radius: RADIUS, script }),
                None => continue 'attempt,
            }
        }
        let scenario = Scenario {
            version: SCENARIO_VERSION,
            name: format!("dynamic-n{}-o{}-s{seed}", p.agents, p.obstacles),
            duration: p.duration + SETTLE,
            tick: 0.01,
            replan_period: period,
            seed,
            measurement_noise: 0.0,
            bounds: bounds_for(p.arena, planner.d_max()),
            static_obstacles: vec![],
            dynamic_obstacles: obstacles,
            target: MovingDisc { radius: RADIUS, script: target },
            agents,
            planner: planner.clone(),
        };
        if scenario.validate().is_ok() {
            return Ok(scenario);
        }
    }
    Err(GeneratorError::Initialization(ATTEMPTS))
}
