//! Pointwise re-validation of a trajectory against the same predicted world
//! the certificates were computed for. Used to audit selected plans.

use serde::Serialize;

use super::{CheckInputs, CheckKind};
use crate::bernstein::Curve2;
use crate::geom::{cross, point_segment_distance, Obstacle};

/// Absolute slack (metres, m/s, ...) tolerated by the audit.
pub const AUDIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub kind: CheckKind,
    pub t: f64,
    /// How far past the limit the sample was.
    pub excess: f64,
}

/// Samples `traj` at `samples` evenly spaced times and reports every
/// constraint violated by more than [`AUDIT_TOLERANCE`].
pub fn dense_violations(traj: &Curve2, inputs: &CheckInputs, static_obstacles: &[Obstacle], samples: usize) -> Vec<Violation> {
    let horizon = traj.horizon();
    let vel = traj.derivative();
    let acc = vel.derivative();
    let target_vel = inputs.target.derivative();
    let l = &inputs.limits;
    let r_c = inputs.agent_radius;
    let mut out = Vec::new();
    let n = samples.max(2);
    for k in 0..n {
        let t = horizon * k as f64 / (n - 1) as f64;
        let mut flag = |kind: CheckKind, excess: f64| {
            if excess > AUDIT_TOLERANCE {
                out.push(Violation { kind, t, excess });
            }
        };
        let x = traj.at(t);
        let q = inputs.target.at(t);
        let seg = &inputs.corridor.segments()[inputs.corridor.window_at(t)];
        let outside = seg.region.half_planes().iter().map(|h| h.signed_distance(&x)).fold(f64::NEG_INFINITY, f64::max);
        flag(CheckKind::CorridorVisibility, outside);
        flag(CheckKind::CorridorSafety, outside + r_c);
        for o in static_obstacles {
            flag(CheckKind::CorridorSafety, r_c - o.distance_to_point(&x));
            if o.distance_to_segment(&x, &q) <= 0.0 {
                flag(CheckKind::CorridorVisibility, f64::INFINITY);
            }
        }
        let d = (x - q).norm();
        flag(CheckKind::DistanceMin, l.d_min - d);
        flag(CheckKind::DistanceMax, d - l.d_max);
        for o in &inputs.obstacles {
            let c = o.path.at(t);
            flag(CheckKind::DynamicCollision, r_c + o.radius - (x - c).norm());
            flag(CheckKind::DynamicOcclusion, o.radius - point_segment_distance(&c, &x, &q));
        }
        for o in &inputs.occluders {
            let c = o.path.at(t);
            flag(CheckKind::DynamicOcclusion, o.radius - point_segment_distance(&c, &x, &q));
        }
        flag(CheckKind::TargetCollision, r_c + inputs.target_radius - d);
        for h in &inputs.dbvc {
            flag(CheckKind::Dbvc, h.value_at(&x, t) / h.normal().norm());
        }
        for pair in &inputs.divc {
            for h in pair.halves() {
                flag(CheckKind::Divc, h.value_at(&x, t) / h.normal().norm());
            }
        }
        let v = vel.at(t);
        flag(CheckKind::Vel, v.norm() - l.v_max);
        flag(CheckKind::Acc, acc.at(t).norm() - l.a_max);
        let rel = q - x;
        let yaw_rate = cross(&rel, &(target_vel.at(t) - v)) / rel.norm_squared();
        flag(CheckKind::Yaw, yaw_rate.abs() - l.yaw_rate_max);
    }
    out
}
