//! Safe-and-visible corridors: one convex region per time window that keeps
//! clear of every static obstacle and contains the agent and the target's
//! predicted positions over that window.
//!
//! Containing the target is what makes the region useful for visibility: any
//! point of a convex, obstacle-free region sees every other point of it, so
//! an agent inside sees the target.

use serde::Serialize;
use thiserror::Error;

use crate::bernstein::{Curve2, Vec2};
use crate::geom::{closest_point_on_hull, closest_points_between_hulls, convex_hull, Aabb, ConvexPolygon, HalfPlane, Obstacle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorridorError {
    #[error("window count must be at least 1")]
    NoWindows,
    #[error("agent at ({x:.3}, {y:.3}) is within the clearance of obstacle {obstacle}")]
    AgentInObstacle { obstacle: usize, x: f64, y: f64 },
    #[error("obstacle {obstacle} blocks the seed set of window {window}")]
    Blocked { window: usize, obstacle: usize },
    #[error("window {window} leaves the bounds")]
    OutOfBounds { window: usize },
    #[error("window {window} has an empty region")]
    Empty { window: usize },
    #[error("window {window} is empty after erosion")]
    EmptyAfterErosion { window: usize },
}

/// Construction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorridorParams {
    pub windows: usize,
    /// How far the seed bounding box is grown before obstacles cut it.
    pub inflate: f64,
    /// Agent radius: obstacles are kept this far from every region.
    pub clearance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorridorSegment {
    pub start: f64,
    pub end: f64,
    pub region: ConvexPolygon,
    /// `region` shrunk by the clearance; control points of a safe trajectory
    /// piece must lie here.
    pub eroded: ConvexPolygon,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corridor {
    segments: Vec<CorridorSegment>,
}

impl Corridor {
    pub fn segments(&self) -> &[CorridorSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Interior window boundaries, suitable for [`Curve2::split`].
    pub fn breakpoints(&self) -> Vec<f64> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// Index of the window containing `t` (clamped to the horizon).
    pub fn window_at(&self, t: f64) -> usize {
        self.segments
            .iter()
            .position(|s| t < s.end)
            .unwrap_or(self.segments.len() - 1)
    }
}

/// Builds one region per uniform window of the target prediction's horizon.
pub fn build_corridor(
    agent_pos: &Vec2,
    target_prediction: &Curve2,
    obstacles: &[Obstacle],
    params: &CorridorParams,
    bounds: &Aabb,
) -> Result<Corridor, CorridorError> {
    if params.windows == 0 {
        return Err(CorridorError::NoWindows);
    }
    let r_c = params.clearance;
    if let Some(k) = obstacles.iter().position(|o| o.distance_to_point(agent_pos) <= r_c) {
        return Err(CorridorError::AgentInObstacle { obstacle: k, x: agent_pos.x, y: agent_pos.y });
    }
    let horizon = target_prediction.horizon();
    let m = params.windows;
    let breaks: Vec<f64> = (1..m).map(|k| horizon * k as f64 / m as f64).collect();
    let pieces = target_prediction.split(&breaks).expect("uniform breakpoints");

    let mut segments = Vec::with_capacity(m);
    for (w, piece) in pieces.iter().enumerate() {
        let start = horizon * w as f64 / m as f64;
        let end = if w + 1 == m { horizon } else { horizon * (w + 1) as f64 / m as f64 };
        // the piece's control points bound the whole window's target path
        let mut seeds: Vec<Vec2> = Vec::with_capacity(piece.degree() + 3);
        seeds.push(*agent_pos);
        seeds.extend_from_slice(piece.control_points());
        seeds.push(piece.at(0.5 * piece.horizon()));

        let region0 = Aabb::around(&seeds)
            .inflate(params.inflate)
            .intersection(bounds)
            .ok_or(CorridorError::OutOfBounds { window: w })?;
        if !seeds.iter().all(|s| region0.contains(s)) {
            return Err(CorridorError::OutOfBounds { window: w });
        }
        let hull = convex_hull(&seeds);
        let mut planes = Vec::new();
        for (k, obstacle) in obstacles.iter().enumerate() {
            if gap_to_box(obstacle, &region0) > r_c {
                continue;
            }
            let plane = separating_plane(obstacle, &hull, r_c)
                .ok_or(CorridorError::Blocked { window: w, obstacle: k })?;
            planes.push(plane);
        }
        let region = ConvexPolygon::from_half_planes(&region0, &planes)
            .ok_or(CorridorError::Empty { window: w })?;
        let eroded = region.erode(r_c).ok_or(CorridorError::EmptyAfterErosion { window: w })?;
        segments.push(CorridorSegment { start, end, region, eroded });
    }
    Ok(Corridor { segments })
}

fn gap_to_box(obstacle: &Obstacle, b: &Aabb) -> f64 {
    match *obstacle {
        Obstacle::Disc { center, radius } => b.distance_to_point(&center) - radius,
        Obstacle::Box { min, max } => {
            let dx = (min.x - b.max.x).max(b.min.x - max.x).max(0.0);
            let dy = (min.y - b.max.y).max(b.min.y - max.y).max(0.0);
            dx.hypot(dy)
        }
    }
}

/// Half-plane tangent to the obstacle grown by `r_c`, facing the seed hull.
/// `None` if the grown obstacle touches the hull.
fn separating_plane(obstacle: &Obstacle, hull: &[Vec2], r_c: f64) -> Option<HalfPlane> {
    let (toward, foot, reach) = match *obstacle {
        Obstacle::Disc { center, radius } => {
            let (p, d) = closest_point_on_hull(hull, &center);
            if d <= radius + r_c {
                return None;
            }
            ((p - center) / d, center, radius + r_c)
        }
        Obstacle::Box { min, max } => {
            let corners = Aabb { min, max }.corners();
            let (d, on_box, on_hull) = closest_points_between_hulls(&corners, hull)?;
            if d <= r_c {
                return None;
            }
            ((on_hull - on_box) / d, on_box, r_c)
        }
    };
    // keep {x : toward . (x - foot) >= reach}
    HalfPlane::new(-toward, -(toward.dot(&foot) + reach)).ok()
}
