//! Sufficient feasibility certificates for one primitive. Every test is a
//! sign condition on Bernstein coefficients or a control-point containment,
//! so a pass is a proof for the whole horizon and a failure only means the
//! certificate was inconclusive.

use super::{CheckKind, VisibilityMode};
use crate::bernstein::{Curve2, ScalarPoly};
use crate::cells::{DivcPair, MovingHalfSpace};
use crate::corridor::Corridor;

/// A disc moving along a predicted path.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedDisc {
    pub path: Curve2,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub d_min: f64,
    pub d_max: f64,
    pub v_max: f64,
    pub a_max: f64,
    pub yaw_rate_max: f64,
}

/// Everything one agent checks its primitives against in one replan cycle.
#[derive(Debug, Clone)]
pub struct CheckInputs {
    pub corridor: Corridor,
    pub target: Curve2,
    pub target_radius: f64,
    pub agent_radius: f64,
    /// Moving obstacles, checked for collision and occlusion.
    pub obstacles: Vec<PredictedDisc>,
    /// Neighbours without a usable visibility cell: occlusion only.
    pub occluders: Vec<PredictedDisc>,
    pub dbvc: Vec<MovingHalfSpace>,
    pub divc: Vec<DivcPair>,
    pub limits: Limits,
    pub mode: VisibilityMode,
}

/// Proof that the distance checks passed; required by [`check_dynamics`],
/// whose yaw-rate bound divides by the squared target distance.
#[derive(Debug, Clone)]
pub struct DistanceCertified {
    squared_distance: ScalarPoly,
}

impl DistanceCertified {
    /// `|x_c(t) - x_q(t)|^2`, certified to stay at least `d_min^2 > 0`.
    pub fn squared_distance(&self) -> &ScalarPoly {
        &self.squared_distance
    }
}

fn nonnegative_with(poly: &ScalarPoly, shift: f64) -> bool {
    poly.control_points().iter().all(|&c| c + shift >= 0.0)
}

fn pieces_within(pieces: &[Curve2], corridor: &Corridor, eroded: bool) -> bool {
    pieces.iter().zip(corridor.segments()).all(|(piece, seg)| {
        let region = if eroded { &seg.eroded } else { &seg.region };
        region.contains_all(piece.control_points())
    })
}

fn split_at_windows(primitive: &Curve2, corridor: &Corridor) -> Vec<Curve2> {
    primitive.split(&corridor.breakpoints()).expect("corridor windows inside the horizon")
}

/// Collision certificate for one moving disc: `|x_c - x_o|^2 >= (r_c + r_o)^2`.
pub fn clear_of(primitive: &Curve2, disc: &PredictedDisc, agent_radius: f64) -> bool {
    let reach = agent_radius + disc.radius;
    nonnegative_with(&(primitive - &disc.path).squared_norm(), -reach * reach)
}

/// Certifies that the segment from the agent to the target keeps `r_o` away
/// from the disc's centre for the whole horizon, writing the squared
/// distance from a point of the segment as
/// `e^2 s1 + 2e(1-e) s2 + (1-e)^2 s3`.
///
/// `skip_agent_term` may be set when the relaxed agent-side term is already
/// implied by a passed collision certificate against the same disc.
pub fn occlusion_free(
    primitive: &Curve2,
    target: &Curve2,
    target_radius: f64,
    agent_radius: f64,
    disc: &PredictedDisc,
    mode: VisibilityMode,
    skip_agent_term: bool,
) -> bool {
    let r_o = disc.radius;
    let r_o2 = r_o * r_o;
    let to_agent = primitive - &disc.path;
    let to_target = target - &disc.path;
    match mode {
        VisibilityMode::Conservative => {
            nonnegative_with(&to_agent.squared_norm(), -r_o2)
                && nonnegative_with(&to_agent.dot(&to_target), -r_o2)
                && nonnegative_with(&to_target.squared_norm(), -r_o2)
        }
        VisibilityMode::Relaxed => {
            let rr = r_o + target_radius.min(agent_radius);
            let target_reach = r_o + target_radius;
            let agent_reach = r_o + agent_radius;
            nonnegative_with(&to_target.squared_norm(), -target_reach * target_reach)
                && nonnegative_with(&to_agent.dot(&to_target), rr * rr - 2.0 * r_o2)
                && (skip_agent_term || nonnegative_with(&to_agent.squared_norm(), -agent_reach * agent_reach))
        }
    }
}

/// Static-corridor safety, moving-obstacle, target and Voronoi-cell collision
/// checks, in canonical order.
pub fn check_collision(primitive: &Curve2, inputs: &CheckInputs) -> Result<(), CheckKind> {
    let pieces = split_at_windows(primitive, &inputs.corridor);
    collision_stage(primitive, &pieces, inputs)
}

fn collision_stage(primitive: &Curve2, pieces: &[Curve2], inputs: &CheckInputs) -> Result<(), CheckKind> {
    if !pieces_within(pieces, &inputs.corridor, true) {
        return Err(CheckKind::CorridorSafety);
    }
    dynamic_stage(primitive, inputs)
}

fn dynamic_stage(primitive: &Curve2, inputs: &CheckInputs) -> Result<(), CheckKind> {
    if !inputs.obstacles.iter().all(|o| clear_of(primitive, o, inputs.agent_radius)) {
        return Err(CheckKind::DynamicCollision);
    }
    let target = PredictedDisc { path: inputs.target.clone(), radius: inputs.target_radius };
    if !clear_of(primitive, &target, inputs.agent_radius) {
        return Err(CheckKind::TargetCollision);
    }
    if !inputs.dbvc.iter().all(|h| h.certifies(primitive)) {
        return Err(CheckKind::Dbvc);
    }
    Ok(())
}

/// Corridor containment, inter-visibility cells and occlusion by moving
/// discs, in canonical order.
pub fn check_visibility(primitive: &Curve2, inputs: &CheckInputs, mode: VisibilityMode) -> Result<(), CheckKind> {
    let pieces = split_at_windows(primitive, &inputs.corridor);
    if !pieces_within(&pieces, &inputs.corridor, false) {
        return Err(CheckKind::CorridorVisibility);
    }
    occlusion_stage(primitive, inputs, mode, false)
}

fn occlusion_stage(primitive: &Curve2, inputs: &CheckInputs, mode: VisibilityMode, collision_done: bool) -> Result<(), CheckKind> {
    if !inputs.divc.iter().all(|c| c.certifies(primitive)) {
        return Err(CheckKind::Divc);
    }
    let occluded = |disc: &PredictedDisc, skip: bool| {
        !occlusion_free(primitive, &inputs.target, inputs.target_radius, inputs.agent_radius, disc, mode, skip)
    };
    if inputs.obstacles.iter().any(|o| occluded(o, collision_done)) || inputs.occluders.iter().any(|o| occluded(o, false)) {
        return Err(CheckKind::DynamicOcclusion);
    }
    Ok(())
}

/// `d_min^2 <= |x_c - x_q|^2 <= d_max^2` for the whole horizon.
pub fn check_distance(primitive: &Curve2, target: &Curve2, d_min: f64, d_max: f64) -> Result<DistanceCertified, CheckKind> {
    let squared_distance = (primitive - target).squared_norm();
    if !nonnegative_with(&squared_distance, -d_min * d_min) {
        return Err(CheckKind::DistanceMin);
    }
    if !squared_distance.control_points().iter().all(|&c| c <= d_max * d_max) {
        return Err(CheckKind::DistanceMax);
    }
    Ok(DistanceCertified { squared_distance })
}

/// Speed, acceleration and yaw-rate limits, the latter assuming the agent
/// always faces the target.
pub fn check_dynamics(
    primitive: &Curve2,
    target: &Curve2,
    distance: &DistanceCertified,
    v_max: f64,
    a_max: f64,
    yaw_rate_max: f64,
) -> Result<(), CheckKind> {
    let vel = primitive.derivative();
    if !nonnegative_with(&vel.squared_norm().scale(-1.0), v_max * v_max) {
        return Err(CheckKind::Vel);
    }
    if !nonnegative_with(&vel.derivative().squared_norm().scale(-1.0), a_max * a_max) {
        return Err(CheckKind::Acc);
    }
    let rel = target - primitive;
    let rel_vel = &target.derivative() - &vel;
    let numerator = rel.cross(&rel_vel);
    let bound = distance.squared_distance.scale(yaw_rate_max);
    if !(&bound - &numerator).coefficients_nonnegative() || !(&bound + &numerator).coefficients_nonnegative() {
        return Err(CheckKind::Yaw);
    }
    Ok(())
}

/// Every check in canonical order; the error is the first failure.
pub fn check_all(primitive: &Curve2, inputs: &CheckInputs) -> Result<(), CheckKind> {
    let pieces = split_at_windows(primitive, &inputs.corridor);
    if !pieces_within(&pieces, &inputs.corridor, false) {
        return Err(CheckKind::CorridorVisibility);
    }
    if !pieces_within(&pieces, &inputs.corridor, true) {
        return Err(CheckKind::CorridorSafety);
    }
    let l = &inputs.limits;
    let distance = check_distance(primitive, &inputs.target, l.d_min, l.d_max)?;
    dynamic_stage(primitive, inputs)?;
    occlusion_stage(primitive, inputs, inputs.mode, true)?;
    check_dynamics(primitive, &inputs.target, &distance, l.v_max, l.a_max, l.yaw_rate_max)
}
