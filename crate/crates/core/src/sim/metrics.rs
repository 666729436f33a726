//! Safety and visibility metrics: surface distances between agents,
//! obstacles and the target, and between each agent's line of sight and
//! everything else. All clamp at contact (0).

use serde::Serialize;

use super::Scenario;
use crate::bernstein::Vec2;
use crate::geom::{point_segment_distance, Obstacle};

/// Positions and radii of everything at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub agents: Vec<(Vec2, f64)>,
    pub target: (Vec2, f64),
    pub static_obstacles: Vec<Obstacle>,
    pub dynamic_obstacles: Vec<(Vec2, f64)>,
}

impl WorldState {
    /// The scenario at `t = 0`.
    pub fn initial(s: &Scenario) -> Self {
        Self {
            agents: s.agents.iter().map(|a| (a.position, a.radius)).collect(),
            target: (s.target.script.state(0.0).0, s.target.radius),
            static_obstacles: s.static_obstacles.clone(),
            dynamic_obstacles: s.dynamic_obstacles.iter().map(|o| (o.script.state(0.0).0, o.radius)).collect(),
        }
    }
}

/// One tick of metrics; `inf` where a metric has nothing to measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub t: f64,
    /// Agent to obstacle.
    pub chi1: f64,
    /// Agent to agent.
    pub chi2: f64,
    /// Agent to target.
    pub chi3: f64,
    /// Line of sight to obstacle.
    pub phi1: f64,
    /// Line of sight to other agents.
    pub phi2: f64,
}

impl MetricsRecord {
    pub const NAMES: [&'static str; 5] = ["chi1", "chi2", "chi3", "phi1", "phi2"];

    pub fn values(&self) -> [f64; 5] {
        [self.chi1, self.chi2, self.chi3, self.phi1, self.phi2]
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, f64)> {
        Self::NAMES.into_iter().zip(self.values())
    }
}

fn surface(d: f64) -> f64 {
    d.max(0.0)
}

/// Metrics of `w` (with `t = 0`).
pub fn measure(w: &WorldState) -> MetricsRecord {
    let mut m = MetricsRecord {
        t: 0.0,
        chi1: f64::INFINITY,
        chi2: f64::INFINITY,
        chi3: f64::INFINITY,
        phi1: f64::INFINITY,
        phi2: f64::INFINITY,
    };
    let (q, r_q) = w.target;
    for (i, &(p, r)) in w.agents.iter().enumerate() {
        for o in &w.static_obstacles {
            m.chi1 = m.chi1.min(surface(o.distance_to_point(&p) - r));
            m.phi1 = m.phi1.min(o.distance_to_segment(&p, &q));
        }
        for &(c, r_o) in &w.dynamic_obstacles {
            m.chi1 = m.chi1.min(surface((p - c).norm() - r - r_o));
            m.phi1 = m.phi1.min(surface(point_segment_distance(&c, &p, &q) - r_o));
        }
        for (j, &(pj, rj)) in w.agents.iter().enumerate() {
            if j == i {
                continue;
            }
            if j > i {
                m.chi2 = m.chi2.min(surface((p - pj).norm() - r - rj));
            }
            m.phi2 = m.phi2.min(surface(point_segment_distance(&pj, &p, &q) - rj));
        }
        m.chi3 = m.chi3.min(surface((p - q).norm() - r - r_q));
    }
    m
}

/// Running minimum and mean of each metric over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsSummary {
    pub min: [f64; 5],
    /// Mean over the finite samples (`inf` when there were none).
    pub mean: [f64; 5],
}

pub fn summarize(history: &[MetricsRecord]) -> MetricsSummary {
    let mut min = [f64::INFINITY; 5];
    let mut sum = [0.0; 5];
    let mut n = [0usize; 5];
    for r in history {
        for (k, v) in r.values().into_iter().enumerate() {
            min[k] = min[k].min(v);
            if v.is_finite() {
                sum[k] += v;
                n[k] += 1;
            }
        }
    }
    let mean = std::array::from_fn(|k| if n[k] > 0 { sum[k] / n[k] as f64 } else { f64::INFINITY });
    MetricsSummary { min, mean }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    ObstacleCollision,
    InterAgentCollision,
    TargetCollision,
    ObstacleOcclusion,
    InterAgentOcclusion,
}

impl FailureKind {
    pub const BY_METRIC: [FailureKind; 5] = [
        FailureKind::ObstacleCollision,
        FailureKind::InterAgentCollision,
        FailureKind::TargetCollision,
        FailureKind::ObstacleOcclusion,
        FailureKind::InterAgentOcclusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FailureKind::ObstacleCollision => "obstacle-collision",
            FailureKind::InterAgentCollision => "inter-agent-collision",
            FailureKind::TargetCollision => "target-collision",
            FailureKind::ObstacleOcclusion => "obstacle-occlusion",
            FailureKind::InterAgentOcclusion => "inter-agent-occlusion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessReport {
    pub success: bool,
    /// Each failure kind that occurred, with the first time it did.
    pub failures: Vec<(FailureKind, f64)>,
}

/// Success means no metric ever reached contact.
pub fn evaluate_success(history: &[MetricsRecord]) -> SuccessReport {
    let mut first: [Option<f64>; 5] = [None; 5];
    for r in history {
        for (k, v) in r.values().into_iter().enumerate() {
            if !(v > 0.0) && first[k].is_none() {
                first[k] = Some(r.t);
            }
        }
    }
    let failures: Vec<(FailureKind, f64)> = first
        .iter()
        .enumerate()
        .filter_map(|(k, t)| t.map(|t| (FailureKind::BY_METRIC[k], t)))
        .collect();
    SuccessReport { success: failures.is_empty(), failures }
}
