//! Moving Voronoi and inter-visibility cells for a pair of agents.
//!
//! Both cells are built from a replan-time snapshot (the two agents' current
//! positions and the shared target prediction) and translate rigidly with the
//! predicted target. Each agent builds its own cells; nothing but the current
//! positions and the common prediction is exchanged.
//!
//! * The buffered Voronoi half-space keeps the two agents `2 r_c` apart when
//!   each stays in its own half.
//! * The inter-visibility cell is the intersection of two half-spaces chosen so
//!   that neither agent comes within `r_c` of the other's line of sight to the
//!   target. Its shape depends on whether the two lines of sight form an obtuse
//!   or an acute angle; a scale factor `alpha >= 1` trades cell size against
//!   clearance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernstein::{Curve2, ScalarPoly, Vec2};
use crate::geom::cross;

/// Minimum distance under which two points are treated as coincident.
pub const COINCIDENT_EPS: f64 = 1e-9;

/// Slack (in metres) granted to half-space certificates, so points exactly on
/// a closed boundary are not rejected by rounding.
pub const BOUNDARY_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CellError {
    #[error("agents {0} and {1} coincide")]
    CoincidentAgents(usize, usize),
    #[error("agent {0} coincides with the target")]
    AgentOnTarget(usize),
    #[error("half-space normal must be nonzero")]
    ZeroNormal,
}

/// What an agent knows about itself or a peer at a replan instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorldAgent {
    pub id: usize,
    pub position: Vec2,
    pub velocity: Vec2,
    pub radius: f64,
}

/// `{x : normal . (x(t) - anchor(t) + anchor_shift) + static_offset <= 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MovingHalfSpace {
    normal: Vec2,
    static_offset: f64,
    anchor: Curve2,
    anchor_shift: Vec2,
}

impl MovingHalfSpace {
    pub fn new(normal: Vec2, static_offset: f64, anchor: Curve2, anchor_shift: Vec2) -> Result<Self, CellError> {
        if !(normal.norm() > 0.0) {
            return Err(CellError::ZeroNormal);
        }
        Ok(Self { normal, static_offset, anchor, anchor_shift })
    }

    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    pub fn static_offset(&self) -> f64 {
        self.static_offset
    }

    pub fn anchor(&self) -> &Curve2 {
        &self.anchor
    }

    pub fn anchor_shift(&self) -> Vec2 {
        self.anchor_shift
    }

    /// Constraint value at time `t`; the point is a member iff it is `<= 0`.
    pub fn value_at(&self, x: &Vec2, t: f64) -> f64 {
        self.value_relative(&(x - self.anchor.at(t)))
    }

    pub fn contains(&self, x: &Vec2, t: f64) -> bool {
        self.value_at(x, t) <= 0.0
    }

    fn value_relative(&self, rel: &Vec2) -> f64 {
        self.normal.dot(&(rel + self.anchor_shift)) + self.static_offset
    }

    /// Scalar polynomial that is nonnegative exactly where `traj` is inside.
    pub fn membership_polynomial(&self, traj: &Curve2) -> ScalarPoly {
        let rel = traj - &self.anchor;
        rel.map(|p| -self.value_relative(&p))
    }

    /// Convex-hull certificate that `traj` stays inside for the whole horizon
    /// (up to [`BOUNDARY_SLACK`]).
    pub fn certifies(&self, traj: &Curve2) -> bool {
        let slack = self.slack();
        self.membership_polynomial(traj).control_points().iter().all(|&g| g >= -slack)
    }

    fn slack(&self) -> f64 {
        BOUNDARY_SLACK * self.normal.norm()
    }

    /// Same certificate as [`certifies`](Self::certifies), given the already
    /// computed `traj - anchor`. The caller must pass a curve relative to this
    /// half-space's own anchor.
    pub fn certifies_relative(&self, rel: &Curve2) -> bool {
        let slack = self.slack();
        rel.control_points().iter().all(|p| self.value_relative(p) <= slack)
    }

    /// The same half-space with the anchor frozen at its initial position.
    pub fn frozen(&self) -> Self {
        Self {
            anchor: Curve2::constant(self.anchor.first(), self.anchor.horizon()),
            ..self.clone()
        }
    }
}

/// How `alpha` is picked inside its valid range `[1, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    #[default]
    Midpoint,
    /// `alpha = 1`: largest cell.
    Min,
    /// `alpha = upper`: largest clearance from the neighbour's line of sight.
    Max,
}

impl AlphaPolicy {
    pub fn pick(self, upper: f64) -> f64 {
        match self {
            AlphaPolicy::Midpoint => 0.5 * (1.0 + upper),
            AlphaPolicy::Min => 1.0,
            AlphaPolicy::Max => upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivcCase {
    Obtuse,
    Acute,
    /// The valid alpha range is empty; the neighbour must be handled as a
    /// moving occluder instead.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivcPair {
    pub case: DivcCase,
    pub alpha: f64,
    /// Upper end of the valid alpha range.
    pub alpha_upper: f64,
    halves: Option<[MovingHalfSpace; 2]>,
}

impl DivcPair {
    pub fn halves(&self) -> &[MovingHalfSpace] {
        match &self.halves {
            Some(h) => h,
            None => &[],
        }
    }

    pub fn is_fallback(&self) -> bool {
        self.case == DivcCase::Fallback
    }

    pub fn certifies(&self, traj: &Curve2) -> bool {
        self.halves().iter().all(|h| h.certifies(traj))
    }

    pub fn frozen(&self) -> Self {
        Self {
            halves: self.halves.as_ref().map(|[a, b]| [a.frozen(), b.frozen()]),
            ..self.clone()
        }
    }
}

fn pair_radius(me: &WorldAgent, other: &WorldAgent) -> f64 {
    me.radius.max(other.radius)
}

/// Buffered Voronoi half-space of `me` against `other`, moving with the
/// target prediction.
pub fn build_dbvc(me: &WorldAgent, other: &WorldAgent, target_prediction: &Curve2) -> Result<MovingHalfSpace, CellError> {
    let normal = other.position - me.position;
    let separation = normal.norm();
    if separation <= COINCIDENT_EPS {
        return Err(CellError::CoincidentAgents(me.id, other.id));
    }
    let r_c = pair_radius(me, other);
    let target_now = target_prediction.first();
    let shift = target_now - (me.position + other.position) * 0.5;
    MovingHalfSpace::new(normal, r_c * separation, target_prediction.clone(), shift)
}

/// Classifies the pair geometry and returns the valid upper bound on alpha.
/// `rel_me`, `rel_other` are the agents' positions relative to the target.
pub fn alpha_upper_bound(rel_me: &Vec2, rel_other: &Vec2, r_c: f64) -> (DivcCase, f64) {
    let d_me = rel_me.norm();
    let d_other = rel_other.norm();
    let n_me = rel_me / d_me;
    let n_other = rel_other / d_other;
    let cos = n_me.dot(&n_other);
    if rel_me.dot(rel_other) <= 0.0 {
        let upper = (d_me.min(d_other) / r_c).min((2.0 / (1.0 - cos)).sqrt());
        (DivcCase::Obtuse, upper)
    } else {
        let det = cross(rel_me, rel_other).abs();
        let upper = (det / (r_c * d_me.max(d_other))).min((2.0 * (1.0 + cos)).sqrt());
        (DivcCase::Acute, upper)
    }
}

/// Inter-visibility cell of `me` against `other`.
pub fn build_divc(
    me: &WorldAgent,
    other: &WorldAgent,
    target_prediction: &Curve2,
    policy: AlphaPolicy,
) -> Result<DivcPair, CellError> {
    let target_now = target_prediction.first();
    let rel_me = me.position - target_now;
    let rel_other = other.position - target_now;
    if rel_me.norm() <= COINCIDENT_EPS {
        return Err(CellError::AgentOnTarget(me.id));
    }
    if rel_other.norm() <= COINCIDENT_EPS {
        return Err(CellError::AgentOnTarget(other.id));
    }
    let r_c = pair_radius(me, other);
    let (case, upper) = alpha_upper_bound(&rel_me, &rel_other, r_c);
    if !(upper >= 1.0) {
        return Ok(DivcPair { case: DivcCase::Fallback, alpha: f64::NAN, alpha_upper: upper, halves: None });
    }
    let alpha = policy.pick(upper).clamp(1.0, upper);

    let n_me = rel_me.normalize();
    let n_other = rel_other.normalize();
    // side of `me` relative to `other`; the antipodal obtuse case has det == 0
    // and a forced alpha of 1, where both signs give the same half-space
    let z = if cross(&rel_other, &rel_me) < 0.0 { -1.0 } else { 1.0 };

    // sin/cos of the tangent angle theta; cos is formed without the
    // cancellation of sqrt(1 - sin^2), which matters when sin is near 1
    let slack = (alpha - 1.0) * (alpha + 1.0);
    let (sin_t, cos_t, shift_len) = match case {
        DivcCase::Obtuse => (1.0 / alpha, slack.max(0.0).sqrt() / alpha, alpha * r_c),
        DivcCase::Acute => {
            let det_n = cross(&n_me, &n_other).abs();
            let cos_n = n_me.dot(&n_other);
            (det_n / alpha, (slack + cos_n * cos_n).max(0.0).sqrt() / alpha, alpha * r_c / det_n)
        }
        DivcCase::Fallback => unreachable!(),
    };
    let sin_t = sin_t.min(1.0);
    // direction angle phi = theta_other + z * theta
    let cos_phi = n_other.x * cos_t - z * n_other.y * sin_t;
    let sin_phi = n_other.y * cos_t + z * n_other.x * sin_t;
    let ray_normal = Vec2::new(z * sin_phi, -z * cos_phi);

    let first = match case {
        DivcCase::Obtuse => MovingHalfSpace::new(-n_me, alpha * r_c, target_prediction.clone(), Vec2::zeros())?,
        _ => MovingHalfSpace::new(
            Vec2::new(rel_other.y, -rel_other.x) * z,
            alpha * r_c * rel_other.norm(),
            target_prediction.clone(),
            Vec2::zeros(),
        )?,
    };
    let second = MovingHalfSpace::new(ray_normal, 0.0, target_prediction.clone(), -n_me * shift_len)?;
    Ok(DivcPair { case, alpha, alpha_upper: upper, halves: Some([first, second]) })
}
