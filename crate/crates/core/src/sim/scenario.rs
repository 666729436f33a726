//! Scenario description and its TOML file format.
//!
//! ```toml
//! version = 1
//! duration = 20.0          # seconds
//! tick = 0.01              # integration step
//! replan_period = 0.1      # must be a multiple of tick
//! seed = 7
//! measurement_noise = 0.0  # std-dev of target/obstacle measurements
//!
//! [bounds]
//! min = [-3.0, -3.0]
//! max = [3.0, 3.0]
//!
//! [[static_obstacles]]
//! kind = "box"             # or "disc" with center/radius
//! min = [1.0, 1.0]
//! max = [1.5, 1.4]
//!
//! [target]
//! radius = 0.075
//! script = { kind = "waypoints", waypoints = [[0.0, 0.0, 0.0], [4.0, 2.0, 0.0]] }
//!
//! [[dynamic_obstacles]]
//! radius = 0.075
//! script = { kind = "orbit", center = [0.0, 0.0], radius = 1.5, angular_speed = 0.3, phase = 0.0 }
//!
//! [[agents]]
//! position = [-0.5, 0.0]
//! radius = 0.075
//!
//! [planner]                # any PlannerConfig field
//! sample_count = 500
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernstein::Vec2;
use crate::geom::{Aabb, Obstacle};
use crate::planner::{ConfigError, PlannerConfig};

pub const SCENARIO_VERSION: u32 = 1;

/// Largest seed a scenario document can hold (TOML integers are signed).
pub const MAX_SEED: u64 = i64::MAX as u64;

/// Times this close to a waypoint count as having reached it, so replan
/// instants computed as `k * tick` line up with waypoint times.
const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("unsupported scenario version {0} (expected {SCENARIO_VERSION})")]
    Version(u32),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("invalid planner config: {0}")]
    Planner(#[from] ConfigError),
    #[error("initial configuration already violates {metric} ({value:.4})")]
    InitialViolation { metric: &'static str, value: f64 },
}

/// Scripted motion of a moving disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Script {
    /// Piecewise constant velocity through `[t, x, y]` rows with increasing
    /// `t`; holds the first point before and the last point after.
    Waypoints { waypoints: Vec<[f64; 3]> },
    /// Circular motion. Curved, so constant-velocity prediction is never
    /// exact; meant for robustness runs.
    Orbit { center: Vec2, radius: f64, angular_speed: f64, phase: f64 },
}

impl Script {
    pub fn stationary(p: Vec2) -> Self {
        Script::Waypoints { waypoints: vec![[0.0, p.x, p.y]] }
    }

    /// Position and velocity at time `t`. Velocity is right-continuous, so at
    /// a waypoint it is the velocity of the segment that starts there.
    pub fn state(&self, t: f64) -> (Vec2, Vec2) {
        match self {
            Script::Waypoints { waypoints } => {
                let at = |w: &[f64; 3]| Vec2::new(w[1], w[2]);
                let first = &waypoints[0];
                if t < first[0] - TIME_EPS {
                    return (at(first), Vec2::zeros());
                }
                // first waypoint still ahead of t
                let k = waypoints.partition_point(|w| w[0] - TIME_EPS <= t);
                if k < waypoints.len() {
                    let (a, b) = (&waypoints[k - 1], &waypoints[k]);
                    let vel = (at(b) - at(a)) / (b[0] - a[0]);
                    return (at(a) + vel * (t - a[0]), vel);
                }
                (at(waypoints.last().expect("non-empty")), Vec2::zeros())
            }
            Script::Orbit { center, radius, angular_speed, phase } => {
                let a = phase + angular_speed * t;
                let pos = center + Vec2::new(a.cos(), a.sin()) * *radius;
                let vel = Vec2::new(-a.sin(), a.cos()) * (radius * angular_speed);
                (pos, vel)
            }
        }
    }

    /// True if the script follows constant-velocity segments.
    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self, Script::Waypoints { .. })
    }

    /// Time after which the script no longer moves (infinite for orbits).
    pub fn end_time(&self) -> f64 {
        match self {
            Script::Waypoints { waypoints } => waypoints.last().map_or(0.0, |w| w[0]),
            Script::Orbit { .. } => f64::INFINITY,
        }
    }

    fn validate(&self, what: &str) -> Result<(), ScenarioError> {
        let bad = |m: &str| Err(ScenarioError::Invalid(format!("{what}: {m}")));
        match self {
            Script::Waypoints { waypoints } => {
                if waypoints.is_empty() {
                    return bad("no waypoints");
                }
                if waypoints.iter().flatten().any(|x| !x.is_finite()) {
                    return bad("non-finite waypoint");
                }
                if waypoints.windows(2).any(|p| p[1][0] <= p[0][0]) {
                    return bad("waypoint times must increase");
                }
            }
            Script::Orbit { center, radius, angular_speed, phase } => {
                if !(radius.is_finite() && *radius > 0.0) || !angular_speed.is_finite() || !phase.is_finite() || !center.iter().all(|c| c.is_finite()) {
                    return bad("orbit parameters must be finite with positive radius");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MovingDisc {
    pub radius: f64,
    pub script: Script,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub position: Vec2,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default)]
    pub name: String,
    pub duration: f64,
    #[serde(default = "default_tick")]
    pub tick: f64,
    #[serde(default = "default_replan")]
    pub replan_period: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub measurement_noise: f64,
    pub bounds: Aabb,
    #[serde(default)]
    pub static_obstacles: Vec<Obstacle>,
    #[serde(default)]
    pub dynamic_obstacles: Vec<MovingDisc>,
    pub target: MovingDisc,
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub planner: PlannerConfig,
}

fn parse_error(e: toml::de::Error) -> ScenarioError {
    ScenarioError::Parse(e.to_string().trim_end().to_string())
}

fn check_version(table: &toml::Table) -> Result<(), ScenarioError> {
    match table.get("version").and_then(|v| v.as_integer()) {
        Some(v) if v != SCENARIO_VERSION as i64 => Err(ScenarioError::Version(v as u32)),
        _ => Ok(()),
    }
}

fn default_tick() -> f64 {
    0.01
}

fn default_replan() -> f64 {
    0.1
}

impl Scenario {
    /// Parses a scenario document. Syntax and type errors carry the line and
    /// column they refer to.
    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let table: toml::Table = toml::from_str(text).map_err(parse_error)?;
        check_version(&table)?;
        let scenario: Scenario = toml::from_str(text).map_err(parse_error)?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Parses an already-loaded document (e.g. after overrides).
    pub fn from_toml_table(table: toml::Table) -> Result<Self, ScenarioError> {
        check_version(&table)?;
        let scenario: Scenario = table.try_into().map_err(parse_error)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Ticks per replan cycle.
    pub fn ticks_per_replan(&self) -> usize {
        (self.replan_period / self.tick).round() as usize
    }

    pub fn tick_count(&self) -> usize {
        (self.duration / self.tick).round() as usize
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |m: String| Err(ScenarioError::Invalid(m));
        if self.version != SCENARIO_VERSION {
            return Err(ScenarioError::Version(self.version));
        }
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return invalid(format!("duration must be finite and nonnegative, got {}", self.duration));
        }
        if !(self.tick.is_finite() && self.tick > 0.0) || !(self.replan_period.is_finite() && self.replan_period > 0.0) {
            return invalid("tick and replan_period must be positive".into());
        }
        let ratio = self.replan_period / self.tick;
        if ratio.round() < 1.0 || (ratio - ratio.round()).abs() > 1e-9 {
            return invalid("replan_period must be a whole multiple of tick".into());
        }
        if self.seed > MAX_SEED || self.planner.seed > MAX_SEED {
            return invalid(format!("seeds must not exceed {MAX_SEED}"));
        }
        if !(self.measurement_noise.is_finite() && self.measurement_noise >= 0.0) {
            return invalid("measurement_noise must be nonnegative".into());
        }
        if Aabb::new(self.bounds.min, self.bounds.max).is_err() {
            return invalid("bounds: min must be below max".into());
        }
        for (k, o) in self.static_obstacles.iter().enumerate() {
            o.validate().map_err(|e| ScenarioError::Invalid(format!("static obstacle {k}: {e}")))?;
        }
        let positive = |r: f64| r.is_finite() && r > 0.0;
        if !positive(self.target.radius) {
            return invalid("target radius must be positive".into());
        }
        self.target.script.validate("target")?;
        for (k, o) in self.dynamic_obstacles.iter().enumerate() {
            if !positive(o.radius) {
                return invalid(format!("dynamic obstacle {k}: radius must be positive"));
            }
            o.script.validate(&format!("dynamic obstacle {k}"))?;
        }
        if self.agents.is_empty() {
            return invalid("at least one agent is required".into());
        }
        for (k, a) in self.agents.iter().enumerate() {
            if !positive(a.radius) || !a.position.iter().all(|c| c.is_finite()) {
                return invalid(format!("agent {k}: bad position or radius"));
            }
            if !self.bounds.contains(&a.position) {
                return invalid(format!("agent {k} starts outside the bounds"));
            }
            self.planner.validate(a.radius + self.target.radius)?;
        }
        let m = super::metrics::measure(&super::metrics::WorldState::initial(self));
        for (name, value) in m.named() {
            if !(value > 0.0) {
                return Err(ScenarioError::InitialViolation { metric: name, value });
            }
        }
        Ok(())
    }
}
