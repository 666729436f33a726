//! Deterministic lockstep simulation.
//!
//! Every replan period all agents plan from one shared snapshot (current
//! positions, measured target and obstacle states); each then flies its
//! selected curve exactly until the next replan. An agent whose planning
//! fails keeps flying its previous curve, and hovers at its end once the
//! horizon runs out.

mod generate;
mod metrics;
mod output;
mod scenario;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use generate::{dynamic_obstacle_scenario, empty_space_scenario, DynamicParams, EmptySpaceParams, GeneratorError};
pub use metrics::{evaluate_success, measure, summarize, FailureKind, MetricsRecord, MetricsSummary, SuccessReport, WorldState};
pub use output::{write_metrics_csv, write_plan_log_csv, write_trajectories_jsonl};
pub use scenario::{AgentSpec, MovingDisc, Scenario, ScenarioError, Script, MAX_SEED, SCENARIO_VERSION};

use crate::bernstein::{Curve2, Vec2};
use crate::cells::WorldAgent;
use crate::planner::{check_inputs, dense_violations, PlanOutcome, Planner, Violation, WorldSnapshot};
use crate::predict::MovingObjectState;

/// Samples per plan used by the audit.
pub const AUDIT_SAMPLES: usize = 1000;

/// The curve an agent is flying and when it started.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentTrack {
    pub id: usize,
    pub radius: f64,
    pub curve: Curve2,
    pub start: f64,
}

impl AgentTrack {
    /// Position and velocity at absolute time `t`.
    pub fn state(&self, t: f64) -> (Vec2, Vec2) {
        let tau = t - self.start;
        if tau >= self.curve.horizon() {
            return (self.curve.last(), Vec2::zeros());
        }
        let tau = tau.max(0.0);
        (self.curve.at(tau), self.curve.derivative().at(tau))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanLogRow {
    pub cycle: u64,
    pub time: f64,
    pub agent: usize,
    /// `new` or `keep`.
    pub status: &'static str,
    pub reason: String,
    pub passed: usize,
    pub histogram: String,
    pub wall_ms: f64,
    /// First 8 bytes of the snapshot digest, hex.
    pub snapshot: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub cycle: u64,
    pub time: f64,
    pub agent: usize,
    pub status: &'static str,
    pub start: f64,
    pub horizon: f64,
    pub control_points: Vec<Vec2>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AuditStats {
    pub plans: usize,
    pub violations: Vec<(u64, usize, Violation)>,
}

pub struct Simulation {
    scenario: Scenario,
    planner: Planner,
    tracks: Vec<AgentTrack>,
    tick: usize,
    cycle: u64,
    noise: ChaCha8Rng,
    metrics: Vec<MetricsRecord>,
    plan_log: Vec<PlanLogRow>,
    trajectories: Vec<TrajectoryRecord>,
    audit: Option<AuditStats>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub metrics: Vec<MetricsRecord>,
    pub summary: MetricsSummary,
    pub success: SuccessReport,
    pub plan_log: Vec<PlanLogRow>,
    pub trajectories: Vec<TrajectoryRecord>,
    pub audit: Option<AuditStats>,
}

impl RunResult {
    pub fn keep_previous_count(&self) -> usize {
        self.plan_log.iter().filter(|r| r.status == "keep").count()
    }
}

fn hex8(d: &[u8; 32]) -> String {
    d[..8].iter().map(|b| format!("{b:02x}")).collect()
}

impl Simulation {
    pub fn new(scenario: Scenario) -> Result<Self, ScenarioError> {
        scenario.validate()?;
        let horizon = scenario.planner.horizon;
        let tracks = scenario
            .agents
            .iter()
            .enumerate()
            .map(|(id, a)| AgentTrack { id, radius: a.radius, curve: Curve2::constant(a.position, horizon), start: 0.0 })
            .collect();
        let planner = Planner::new(scenario.planner.clone());
        let noise = ChaCha8Rng::seed_from_u64(scenario.seed ^ 0x006e_6f69_7365);
        let mut sim = Self {
            scenario,
            planner,
            tracks,
            tick: 0,
            cycle: 0,
            noise,
            metrics: Vec::new(),
            plan_log: Vec::new(),
            trajectories: Vec::new(),
            audit: None,
        };
        sim.record_metrics();
        Ok(sim)
    }

    /// Re-validate every selected plan pointwise (slow).
    pub fn with_audit(mut self) -> Self {
        self.audit = Some(AuditStats::default());
        self
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn time(&self) -> f64 {
        self.tick as f64 * self.scenario.tick
    }

    pub fn is_finished(&self) -> bool {
        self.tick >= self.scenario.tick_count()
    }

    pub fn tracks(&self) -> &[AgentTrack] {
        &self.tracks
    }

    pub fn metrics(&self) -> &[MetricsRecord] {
        &self.metrics
    }

    /// Ground truth at absolute time `t`.
    pub fn world_at(&self, t: f64) -> WorldState {
        WorldState {
            agents: self.tracks.iter().map(|a| (a.state(t).0, a.radius)).collect(),
            target: (self.scenario.target.script.state(t).0, self.scenario.target.radius),
            static_obstacles: self.scenario.static_obstacles.clone(),
            dynamic_obstacles: self
                .scenario
                .dynamic_obstacles
                .iter()
                .map(|o| (o.script.state(t).0, o.radius))
                .collect(),
        }
    }

    fn record_metrics(&mut self) {
        let t = self.time();
        let m = measure(&self.world_at(t));
        self.metrics.push(MetricsRecord { t, ..m });
    }

    /// The shared snapshot all agents plan from at the current tick.
    pub fn snapshot(&mut self) -> WorldSnapshot {
        let t = self.time();
        let sigma = self.scenario.measurement_noise;
        let measure_disc = |d: &MovingDisc, rng: &mut ChaCha8Rng| {
            let (p, v) = d.script.state(t);
            MovingObjectState::new(p, v, d.radius).with_noise(sigma, rng)
        };
        let target = measure_disc(&self.scenario.target, &mut self.noise);
        let dynamic_obstacles = self.scenario.dynamic_obstacles.iter().map(|o| measure_disc(o, &mut self.noise)).collect();
        let agents = self
            .tracks
            .iter()
            .map(|a| {
                let (position, velocity) = a.state(t);
                WorldAgent { id: a.id, position, velocity, radius: a.radius }
            })
            .collect();
        WorldSnapshot {
            cycle: self.cycle,
            time: t,
            bounds: self.scenario.bounds,
            static_obstacles: self.scenario.static_obstacles.clone(),
            dynamic_obstacles,
            target,
            agents,
        }
    }

    fn replan(&mut self) {
        let t = self.time();
        let snapshot = self.snapshot();
        let digest = hex8(&snapshot.digest());
        let results: Vec<_> = self.tracks.iter().map(|a| self.planner.plan(&snapshot, a.id)).collect();
        for (track, result) in self.tracks.iter_mut().zip(results) {
            let (status, reason) = match &result.outcome {
                PlanOutcome::Trajectory(curve) => {
                    if let Some(audit) = self.audit.as_mut() {
                        let inputs = check_inputs(&snapshot, track.id, self.planner.config()).expect("planned inputs rebuild");
                        audit.plans += 1;
                        for v in dense_violations(curve, &inputs, &snapshot.static_obstacles, AUDIT_SAMPLES) {
                            audit.violations.push((self.cycle, track.id, v));
                        }
                    }
                    track.curve = curve.clone();
                    track.start = t;
                    ("new", String::new())
                }
                PlanOutcome::KeepPrevious(why) => ("keep", why.to_string()),
            };
            self.plan_log.push(PlanLogRow {
                cycle: self.cycle,
                time: t,
                agent: track.id,
                status,
                reason,
                passed: result.report.passed,
                histogram: result.report.histogram(),
                wall_ms: result.elapsed.as_secs_f64() * 1e3,
                snapshot: digest.clone(),
            });
            self.trajectories.push(TrajectoryRecord {
                cycle: self.cycle,
                time: t,
                agent: track.id,
                status,
                start: track.start,
                horizon: track.curve.horizon(),
                control_points: track.curve.control_points().to_vec(),
            });
        }
        self.cycle += 1;
    }

    /// Advances one tick, replanning first when a replan period begins.
    pub fn step(&mut self) {
        if self.is_finished() {
            return;
        }
        if self.tick.is_multiple_of(self.scenario.ticks_per_replan()) {
            self.replan();
        }
        self.tick += 1;
        self.record_metrics();
    }

    pub fn run(mut self) -> RunResult {
        while !self.is_finished() {
            self.step();
        }
        self.finish()
    }

    pub fn finish(self) -> RunResult {
        RunResult {
            summary: summarize(&self.metrics),
            success: evaluate_success(&self.metrics),
            metrics: self.metrics,
            plan_log: self.plan_log,
            trajectories: self.trajectories,
            audit: self.audit,
        }
    }
}
