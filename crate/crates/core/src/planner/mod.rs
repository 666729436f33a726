//! Per-agent sample-check-select planning.
//!
//! Each replan samples terminal points around the target's predicted end
//! position, builds the minimum-effort cubic to each, rejects every cubic
//! whose certificates fail, and keeps the cheapest survivor.

mod audit;
mod checks;
mod config;
mod cost;
mod primitive;
mod report;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use audit::{dense_violations, Violation, AUDIT_TOLERANCE};
pub use checks::{
    check_all, check_collision, check_distance, check_dynamics, check_visibility, clear_of, occlusion_free, CheckInputs,
    DistanceCertified, Limits, PredictedDisc,
};
pub use config::{CellMode, ConfigError, PlannerConfig, VisibilityMode};
pub use cost::{argmin_cost, distance_cost, jerk_cost, select_best, tracking_cost};
pub use primitive::{initial_acceleration, primitive_effort, sample_terminal_points, solve_primitive};
pub use report::{CheckKind, FeasibilityReport};

use crate::bernstein::Curve2;
use crate::cells::{build_dbvc, build_divc, CellError, WorldAgent};
use crate::corridor::{build_corridor, CorridorError, CorridorParams};
use crate::geom::{Aabb, Obstacle};
use crate::predict::{predict_constant_velocity, MovingObjectState};

/// Shared state every agent plans from in one replan cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldSnapshot {
    pub cycle: u64,
    pub time: f64,
    pub bounds: Aabb,
    pub static_obstacles: Vec<Obstacle>,
    pub dynamic_obstacles: Vec<MovingObjectState>,
    pub target: MovingObjectState,
    pub agents: Vec<WorldAgent>,
}

impl WorldSnapshot {
    /// SHA-256 of the serialized snapshot.
    pub fn digest(&self) -> [u8; 32] {
        let bytes = serde_json::to_vec(self).expect("snapshot serializes");
        Sha256::digest(&bytes).into()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanFailure {
    #[error("agent {0} is not in the snapshot")]
    UnknownAgent(usize),
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    #[error("corridor infeasible: {0}")]
    Corridor(#[from] CorridorError),
    #[error("cell construction failed: {0}")]
    Cells(#[from] CellError),
    #[error("no sampled primitive passed")]
    NoFeasiblePrimitive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    Trajectory(Curve2),
    /// Keep flying the previous trajectory.
    KeepPrevious(PlanFailure),
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub outcome: PlanOutcome,
    pub report: FeasibilityReport,
    /// Sample index and cost of the selected primitive.
    pub selected: Option<(usize, f64)>,
    pub elapsed: Duration,
}

impl PlanResult {
    pub fn trajectory(&self) -> Option<&Curve2> {
        match &self.outcome {
            PlanOutcome::Trajectory(c) => Some(c),
            PlanOutcome::KeepPrevious(_) => None,
        }
    }
}

/// Random stream for one agent in one cycle.
pub fn plan_rng(seed: u64, cycle: u64, agent_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((cycle << 16) ^ agent_id as u64);
    rng
}

/// Predicted path of a moving disc over the planning horizon.
pub fn predict_disc(state: &MovingObjectState, horizon: f64) -> PredictedDisc {
    PredictedDisc { path: predict_constant_velocity(state, horizon, 1), radius: state.radius }
}

/// Assembles what agent `agent_id` checks against in this snapshot.
pub fn check_inputs(snapshot: &WorldSnapshot, agent_id: usize, config: &PlannerConfig) -> Result<CheckInputs, PlanFailure> {
    let me = snapshot
        .agents
        .iter()
        .find(|a| a.id == agent_id)
        .ok_or(PlanFailure::UnknownAgent(agent_id))?;
    config.validate(me.radius + snapshot.target.radius)?;
    let horizon = config.horizon;
    let target = predict_constant_velocity(&snapshot.target, horizon, 1);
    let params = CorridorParams { windows: config.windows, inflate: config.d_max(), clearance: me.radius };
    let corridor = build_corridor(&me.position, &target, &snapshot.static_obstacles, &params, &snapshot.bounds)?;

    let mut obstacles: Vec<PredictedDisc> = snapshot.dynamic_obstacles.iter().map(|o| predict_disc(o, horizon)).collect();
    let mut occluders = Vec::new();
    let mut dbvc = Vec::new();
    let mut divc = Vec::new();
    for other in snapshot.agents.iter().filter(|a| a.id != agent_id) {
        let as_disc = || predict_disc(&MovingObjectState::new(other.position, other.velocity, other.radius), horizon);
        if config.cell_mode == CellMode::None {
            obstacles.push(as_disc());
            continue;
        }
        let voronoi = build_dbvc(me, other, &target)?;
        let visibility = build_divc(me, other, &target, config.alpha_policy)?;
        let frozen = config.cell_mode == CellMode::Static;
        dbvc.push(if frozen { voronoi.frozen() } else { voronoi });
        if visibility.is_fallback() {
            occluders.push(as_disc());
        } else {
            divc.push(if frozen { visibility.frozen() } else { visibility });
        }
    }
    Ok(CheckInputs {
        corridor,
        target,
        target_radius: snapshot.target.radius,
        agent_radius: me.radius,
        obstacles,
        occluders,
        dbvc,
        divc,
        limits: Limits {
            d_min: config.d_min,
            d_max: config.d_max(),
            v_max: config.v_max,
            a_max: config.a_max,
            yaw_rate_max: config.yaw_rate_max,
        },
        mode: config.visibility_mode,
    })
}

/// One sample-check-select cycle for `agent_id`. Pure in its arguments;
/// sample checks run on the ambient rayon pool and the result does not
/// depend on the thread count.
pub fn plan(snapshot: &WorldSnapshot, agent_id: usize, config: &PlannerConfig) -> PlanResult {
    let started = Instant::now();
    let fail = |f: PlanFailure| PlanResult {
        outcome: PlanOutcome::KeepPrevious(f),
        report: FeasibilityReport::default(),
        selected: None,
        elapsed: started.elapsed(),
    };
    let inputs = match check_inputs(snapshot, agent_id, config) {
        Ok(i) => i,
        Err(f) => return fail(f),
    };
    let me = snapshot.agents.iter().find(|a| a.id == agent_id).expect("checked above");
    let mut rng = plan_rng(config.seed, snapshot.cycle, agent_id);
    let terminals = sample_terminal_points(&inputs.target, config, &mut rng);
    let d_des = config.d_des();

    let evaluated: Vec<(Option<CheckKind>, f64)> = terminals
        .par_iter()
        .map(|xf| {
            let primitive = solve_primitive(&me.position, &me.velocity, xf, config.horizon);
            match check_all(&primitive, &inputs) {
                Ok(()) => (None, tracking_cost(&primitive, &inputs.target, config.jerk_weight, d_des)),
                Err(kind) => (Some(kind), f64::INFINITY),
            }
        })
        .collect();

    let selected = argmin_cost(evaluated.iter().enumerate().filter(|(_, e)| e.0.is_none()).map(|(i, e)| (i, e.1)));
    let report = FeasibilityReport::from_outcomes(evaluated.into_iter().map(|e| e.0).collect());
    let outcome = match selected {
        Some((i, _)) => PlanOutcome::Trajectory(solve_primitive(&me.position, &me.velocity, &terminals[i], config.horizon)),
        None => PlanOutcome::KeepPrevious(PlanFailure::NoFeasiblePrimitive),
    };
    PlanResult { outcome, report, selected, elapsed: started.elapsed() }
}

/// A planner bound to its own worker pool.
pub struct Planner {
    config: PlannerConfig,
    pool: Option<rayon::ThreadPool>,
}

impl Planner {
    pub fn new(config: PlannerConfig) -> Self {
        let pool = (config.threads > 0).then(|| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads)
                .build()
                .expect("thread pool")
        });
        Self { config, pool }
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.config
    }

    pub fn plan(&self, snapshot: &WorldSnapshot, agent_id: usize) -> PlanResult {
        match &self.pool {
            Some(pool) => pool.install(|| plan(snapshot, agent_id, &self.config)),
            None => plan(snapshot, agent_id, &self.config),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::Vec2;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn world(agents: Vec<WorldAgent>) -> WorldSnapshot {
        WorldSnapshot {
            cycle: 7,
            time: 0.7,
            bounds: Aabb::new(v(-5.0, -5.0), v(5.0, 5.0)).unwrap(),
            static_obstacles: vec![],
            dynamic_obstacles: vec![],
            target: MovingObjectState::new(Vec2::zeros(), Vec2::zeros(), 0.075),
            agents,
        }
    }

    fn agent(id: usize, x: f64, y: f64) -> WorldAgent {
        WorldAgent { id, position: v(x, y), velocity: Vec2::zeros(), radius: 0.075 }
    }

    #[test]
    fn hovering_agent_stays_near_desired_distance() {
        let snap = world(vec![agent(0, 0.45, 0.0)]);
        let r = plan(&snap, 0, &PlannerConfig::default());
        let traj = r.trajectory().expect("plan found");
        let (_, cost) = r.selected.unwrap();
        assert!(cost < 1e-3, "cost {cost}");
        assert!((traj.last().norm() - 0.45).abs() < 0.05);
        assert_eq!(r.report.outcomes.len(), 1000);
    }

    #[test]
    fn same_inputs_same_plan() {
        let snap = world(vec![agent(0, 0.45, 0.0), agent(1, -0.5, 0.1), agent(2, 0.0, 0.5)]);
        let cfg = PlannerConfig { sample_count: 300, ..Default::default() };
        let a = plan(&snap, 1, &cfg);
        let b = Planner::new(PlannerConfig { threads: 2, ..cfg }).plan(&snap, 1);
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.report, b.report);
        assert_eq!(snap.digest(), snap.clone().digest());
    }

    #[test]
    fn unknown_agent_keeps_previous() {
        let r = plan(&world(vec![agent(0, 0.45, 0.0)]), 4, &PlannerConfig::default());
        assert_eq!(r.outcome, PlanOutcome::KeepPrevious(PlanFailure::UnknownAgent(4)));
    }
}
