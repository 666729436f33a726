//! Planar geometry: half-planes, discs, boxes, convex polygons and exact
//! distance queries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bernstein::Vec2;

/// Tolerance used when clipping polygons; values this close to a boundary
/// count as lying on it.
const CLIP_EPS: f64 = 1e-12;

/// Polygons with less area than this are treated as empty.
const MIN_AREA: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("half-plane normal must be nonzero")]
    ZeroNormal,
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("box corners must satisfy min < max componentwise")]
    BadBox,
    #[error("polygon must be convex, counterclockwise and have positive area")]
    BadPolygon,
}

/// 2D cross product `a.x * b.y - a.y * b.x`.
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// The set `{x : normal . x <= offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    normal: Vec2,
    offset: f64,
}

impl HalfPlane {
    /// Normalises `normal` (and scales `offset` with it).
    pub fn new(normal: Vec2, offset: f64) -> Result<Self, GeomError> {
        let len = normal.norm();
        if !(len > 0.0 && len.is_finite()) {
            return Err(GeomError::ZeroNormal);
        }
        Ok(Self { normal: normal / len, offset: offset / len })
    }

    pub fn normal(&self) -> Vec2 {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Signed distance; negative inside.
    pub fn signed_distance(&self, p: &Vec2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        self.signed_distance(p) <= 0.0
    }

    /// The half-plane moved inward by `r`.
    pub fn shrink(&self, r: f64) -> Self {
        Self { normal: self.normal, offset: self.offset - r }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Vec2,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Vec2, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::BadRadius(radius));
        }
        Ok(Self { center, radius })
    }
}

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec2,
    pub max: Vec2,
}

impl Aabb {
    pub fn new(min: Vec2, max: Vec2) -> Result<Self, GeomError> {
        if !(min.x < max.x && min.y < max.y) {
            return Err(GeomError::BadBox);
        }
        Ok(Self { min, max })
    }

    /// Smallest box containing every point (possibly degenerate).
    pub fn around(points: &[Vec2]) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = -min;
        for p in points {
            min = min.inf(p);
            max = max.sup(p);
        }
        Self { min, max }
    }

    pub fn inflate(&self, r: f64) -> Self {
        let d = Vec2::new(r, r);
        Self { min: self.min - d, max: self.max + d }
    }

    pub fn intersection(&self, other: &Aabb) -> Option<Aabb> {
        let b = Aabb { min: self.min.sup(&other.min), max: self.max.inf(&other.max) };
        (b.min.x < b.max.x && b.min.y < b.max.y).then_some(b)
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn closest_point(&self, p: &Vec2) -> Vec2 {
        p.sup(&self.min).inf(&self.max)
    }

    pub fn distance_to_point(&self, p: &Vec2) -> f64 {
        (p - self.closest_point(p)).norm()
    }

    pub fn center(&self) -> Vec2 {
        (self.min + self.max) * 0.5
    }

    /// Corners in counterclockwise order.
    pub fn corners(&self) -> [Vec2; 4] {
        [
            self.min,
            Vec2::new(self.max.x, self.min.y),
            self.max,
            Vec2::new(self.min.x, self.max.y),
        ]
    }

    /// Distance from the segment `a-b` to the box (zero if they touch).
    pub fn distance_to_segment(&self, a: &Vec2, b: &Vec2) -> f64 {
        if self.contains(a) || self.contains(b) {
            return 0.0;
        }
        let c = self.corners();
        (0..4)
            .map(|k| segment_segment_distance(a, b, &c[k], &c[(k + 1) % 4]).0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// A static obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    Disc { center: Vec2, radius: f64 },
    Box { min: Vec2, max: Vec2 },
}

impl Obstacle {
    pub fn disc(center: Vec2, radius: f64) -> Result<Self, GeomError> {
        Disc::new(center, radius)?;
        Ok(Obstacle::Disc { center, radius })
    }

    pub fn aabb(min: Vec2, max: Vec2) -> Result<Self, GeomError> {
        Aabb::new(min, max)?;
        Ok(Obstacle::Box { min, max })
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        match *self {
            Obstacle::Disc { center, radius } => Disc::new(center, radius).map(|_| ()),
            Obstacle::Box { min, max } => Aabb::new(min, max).map(|_| ()),
        }
    }

    /// Distance from `p` to the obstacle surface, clamped at zero inside.
    pub fn distance_to_point(&self, p: &Vec2) -> f64 {
        match *self {
            Obstacle::Disc { center, radius } => ((p - center).norm() - radius).max(0.0),
            Obstacle::Box { min, max } => Aabb { min, max }.distance_to_point(p),
        }
    }

    /// Distance from the segment `a-b` to the obstacle, clamped at zero.
    pub fn distance_to_segment(&self, a: &Vec2, b: &Vec2) -> f64 {
        match *self {
            Obstacle::Disc { center, radius } => {
                (point_segment_distance(&center, a, b) - radius).max(0.0)
            }
            Obstacle::Box { min, max } => Aabb { min, max }.distance_to_segment(a, b),
        }
    }

    pub fn bounding_box(&self) -> Aabb {
        match *self {
            Obstacle::Disc { center, radius } => Aabb::around(&[center]).inflate(radius),
            Obstacle::Box { min, max } => Aabb { min, max },
        }
    }
}

pub fn closest_point_on_segment(p: &Vec2, a: &Vec2, b: &Vec2) -> Vec2 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return *a;
    }
    let s = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    a + ab * s
}

/// Euclidean distance from `p` to the segment `a-b`; `a == b` is allowed.
pub fn point_segment_distance(p: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    (p - closest_point_on_segment(p, a, b)).norm()
}

/// True if the closed segments `a0-a1` and `b0-b1` share a point.
pub fn segments_intersect(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2) -> bool {
    let d1 = cross(&(a1 - a0), &(b0 - a0));
    let d2 = cross(&(a1 - a0), &(b1 - a0));
    let d3 = cross(&(b1 - b0), &(a0 - b0));
    let d4 = cross(&(b1 - b0), &(a1 - b0));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // touching and collinear cases
    point_segment_distance(b0, a0, a1) == 0.0
        || point_segment_distance(b1, a0, a1) == 0.0
        || point_segment_distance(a0, b0, b1) == 0.0
        || point_segment_distance(a1, b0, b1) == 0.0
}

/// Distance between two segments plus the closest pair `(on a, on b)`.
pub fn segment_segment_distance(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2) -> (f64, Vec2, Vec2) {
    if segments_intersect(a0, a1, b0, b1) {
        // intersection point: solve a0 + s (a1 - a0) = b0 + u (b1 - b0)
        let da = a1 - a0;
        let db = b1 - b0;
        let denom = cross(&da, &db);
        let p = if denom != 0.0 {
            a0 + da * (cross(&(b0 - a0), &db) / denom)
        } else {
            closest_point_on_segment(b0, a0, a1)
        };
        return (0.0, p, p);
    }
    let candidates = [
        (closest_point_on_segment(b0, a0, a1), *b0),
        (closest_point_on_segment(b1, a0, a1), *b1),
        (*a0, closest_point_on_segment(a0, b0, b1)),
        (*a1, closest_point_on_segment(a1, b0, b1)),
    ];
    candidates
        .into_iter()
        .map(|(pa, pb)| ((pa - pb).norm(), pa, pb))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("four candidates")
}

/// Convex hull in counterclockwise order (monotone chain). Collinear points
/// are dropped, so the result may hold one or two points for degenerate input.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Vec2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&(lower[lower.len() - 1] - lower[lower.len() - 2]), &(p - lower[lower.len() - 2]))
                <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&(upper[upper.len() - 1] - upper[upper.len() - 2]), &(p - upper[upper.len() - 2]))
                <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_edges(hull: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    let n = hull.len();
    let count = match n {
        0 => 0,
        1 | 2 => 1,
        _ => n,
    };
    (0..count).map(move |k| (hull[k], hull[(k + 1) % n]))
}

/// True if `p` lies inside (or on) a counterclockwise convex hull with at
/// least three vertices.
fn hull_contains(hull: &[Vec2], p: &Vec2) -> bool {
    hull.len() >= 3
        && hull_edges(hull).all(|(a, b)| cross(&(b - a), &(p - a)) >= 0.0)
}

/// Closest point of a convex hull (as returned by [`convex_hull`]) to `p`,
/// and its distance. Distance is zero when `p` is inside.
pub fn closest_point_on_hull(hull: &[Vec2], p: &Vec2) -> (Vec2, f64) {
    assert!(!hull.is_empty(), "empty hull");
    if hull_contains(hull, p) {
        return (*p, 0.0);
    }
    hull_edges(hull)
        .map(|(a, b)| {
            let c = closest_point_on_segment(p, &a, &b);
            (c, (p - c).norm())
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty hull")
}

/// Closest pair `(on a, on b)` between two convex hulls, or `None` if they
/// overlap.
pub fn closest_points_between_hulls(a: &[Vec2], b: &[Vec2]) -> Option<(f64, Vec2, Vec2)> {
    assert!(!a.is_empty() && !b.is_empty(), "empty hull");
    if a.iter().any(|p| hull_contains(b, p)) || b.iter().any(|p| hull_contains(a, p)) {
        return None;
    }
    let best = hull_edges(a)
        .flat_map(|(a0, a1)| hull_edges(b).map(move |(b0, b1)| segment_segment_distance(&a0, &a1, &b0, &b1)))
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .expect("non-empty hulls");
    (best.0 > 0.0).then_some(best)
}

/// A convex polygon kept in both vertex and half-plane form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
    planes: Vec<HalfPlane>,
}

impl ConvexPolygon {
    /// Builds from counterclockwise vertices of a strictly convex polygon.
    pub fn from_vertices(vertices: Vec<Vec2>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::BadPolygon);
        }
        for k in 0..n {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            let c = vertices[(k + 2) % n];
            if cross(&(b - a), &(c - b)) <= 0.0 {
                return Err(GeomError::BadPolygon);
            }
        }
        if polygon_area(&vertices) <= MIN_AREA {
            return Err(GeomError::BadPolygon);
        }
        let planes = edge_planes(&vertices)?;
        Ok(Self { vertices, planes })
    }

    pub fn from_aabb(b: &Aabb) -> Self {
        Self::from_vertices(b.corners().to_vec()).expect("valid box")
    }

    /// Intersection of `bounds` with the half-planes; `None` when empty.
    pub fn from_half_planes(bounds: &Aabb, planes: &[HalfPlane]) -> Option<Self> {
        planes
            .iter()
            .try_fold(Self::from_aabb(bounds), |poly, plane| poly.clip(plane))
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn half_planes(&self) -> &[HalfPlane] {
        &self.planes
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    pub fn contains(&self, p: &Vec2) -> bool {
        self.planes.iter().all(|h| h.contains(p))
    }

    pub fn contains_all(&self, points: &[Vec2]) -> bool {
        points.iter().all(|p| self.contains(p))
    }

    /// True if the disc of radius `r` around `center` lies in the polygon.
    pub fn contains_disc(&self, center: &Vec2, r: f64) -> bool {
        self.planes.iter().all(|h| h.signed_distance(center) <= -r)
    }

    /// Intersection with a half-plane; `None` when (numerically) empty.
    pub fn clip(&self, plane: &HalfPlane) -> Option<Self> {
        let n = self.vertices.len();
        let mut out: Vec<Vec2> = Vec::with_capacity(n + 1);
        for k in 0..n {
            let p = self.vertices[k];
            let q = self.vertices[(k + 1) % n];
            let vp = plane.signed_distance(&p);
            let vq = plane.signed_distance(&q);
            if vp <= CLIP_EPS {
                out.push(p);
            }
            if (vp < -CLIP_EPS && vq > CLIP_EPS) || (vp > CLIP_EPS && vq < -CLIP_EPS) {
                let s = vp / (vp - vq);
                out.push(p + (q - p) * s);
            }
        }
        clean_polygon(out)
    }

    /// Inward offset by `r`: every half-plane shifted towards the interior.
    /// `None` means the eroded polygon is empty or degenerate.
    pub fn erode(&self, r: f64) -> Option<Self> {
        if r == 0.0 {
            return Some(self.clone());
        }
        self.planes
            .iter()
            .try_fold(self.clone(), |poly, plane| poly.clip(&plane.shrink(r)))
    }

    /// Distance from an outside point to the polygon (zero inside).
    pub fn distance_to_point(&self, p: &Vec2) -> f64 {
        closest_point_on_hull(&self.vertices, p).1
    }
}

fn polygon_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n).map(|k| cross(&vertices[k], &vertices[(k + 1) % n])).sum::<f64>()
}

fn edge_planes(vertices: &[Vec2]) -> Result<Vec<HalfPlane>, GeomError> {
    let n = vertices.len();
    (0..n)
        .map(|k| {
            let a = vertices[k];
            let b = vertices[(k + 1) % n];
            let d = b - a;
            let normal = Vec2::new(d.y, -d.x);
            let len = normal.norm();
            if len == 0.0 {
                return Err(GeomError::BadPolygon);
            }
            let normal = normal / len;
            Ok(HalfPlane { normal, offset: normal.dot(&a) })
        })
        .collect()
}

/// Drops duplicate and collinear vertices left by clipping.
fn clean_polygon(mut pts: Vec<Vec2>) -> Option<ConvexPolygon> {
    pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-12);
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= 1e-12 {
        pts.pop();
    }
    let mut changed = true;
    while changed && pts.len() >= 3 {
        changed = false;
        let n = pts.len();
        for k in 0..n {
            let a = pts[(k + n - 1) % n];
            let b = pts[k];
            let c = pts[(k + 1) % n];
            let scale = (c - a).norm().max(1e-300);
            if cross(&(b - a), &(c - b)) / scale <= 1e-13 {
                pts.remove(k);
                changed = true;
                break;
            }
        }
    }
    if pts.len() < 3 || polygon_area(&pts) <= MIN_AREA {
        return None;
    }
    let planes = edge_planes(&pts).ok()?;
    Some(ConvexPolygon { vertices: pts, planes })
}

/// Reduces a point cloud to discs: greedily opens a disc of `radius` at each
/// point not yet covered by an earlier disc.
pub fn cover_points_with_discs(points: &[Vec2], radius: f64) -> Result<Vec<Disc>, GeomError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(GeomError::BadRadius(radius));
    }
    let mut discs: Vec<Disc> = Vec::new();
    for p in points {
        if !discs.iter().any(|d| (p - d.center).norm() <= d.radius) {
            discs.push(Disc { center: *p, radius });
        }
    }
    Ok(discs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    #[test]
    fn point_segment_cases() {
        assert_eq!(point_segment_distance(&v(0.0, 1.0), &v(-1.0, 0.0), &v(1.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(&v(2.0, 0.0), &v(-1.0, 0.0), &v(1.0, 0.0)), 1.0);
        // degenerate segment
        assert_eq!(point_segment_distance(&v(3.0, 4.0), &v(0.0, 0.0), &v(0.0, 0.0)), 5.0);
    }

    #[test]
    fn segment_segment_cases() {
        let (d, _, _) = segment_segment_distance(&v(0.0, 0.0), &v(1.0, 0.0), &v(0.5, -1.0), &v(0.5, 1.0));
        assert_eq!(d, 0.0);
        let (d, pa, pb) = segment_segment_distance(&v(0.0, 0.0), &v(1.0, 0.0), &v(0.0, 2.0), &v(1.0, 3.0));
        assert!((d - 2.0).abs() < 1e-15);
        assert_eq!(pa, v(0.0, 0.0));
        assert_eq!(pb, v(0.0, 2.0));
        let (d, _, _) = segment_segment_distance(&v(0.0, 0.0), &v(1.0, 0.0), &v(2.0, 0.0), &v(3.0, 0.0));
        assert_eq!(d, 1.0);
    }

    #[test]
    fn erode_unit_square() {
        let sq = ConvexPolygon::from_aabb(&Aabb::new(v(0.0, 0.0), v(1.0, 1.0)).unwrap());
        let e = sq.erode(0.25).unwrap();
        assert!((e.area() - 0.25).abs() < 1e-12);
        let b = Aabb::around(e.vertices());
        assert!((b.min - v(0.25, 0.25)).norm() < 1e-12);
        assert!((b.max - v(0.75, 0.75)).norm() < 1e-12);
        assert!(sq.erode(0.5).is_none());
        assert!(sq.erode(0.7).is_none());
    }

    #[test]
    fn erode_by_zero_is_identity() {
        let p = ConvexPolygon::from_vertices(vec![v(0.0, 0.0), v(2.0, 0.5), v(1.0, 2.0)]).unwrap();
        assert_eq!(p.erode(0.0).unwrap(), p);
    }

    #[test]
    fn rejects_clockwise_or_degenerate_polygons() {
        assert!(ConvexPolygon::from_vertices(vec![v(0.0, 0.0), v(1.0, 2.0), v(2.0, 0.5)]).is_err());
        assert!(ConvexPolygon::from_vertices(vec![v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0)]).is_err());
        assert!(ConvexPolygon::from_vertices(vec![v(0.0, 0.0), v(1.0, 0.0)]).is_err());
    }

    #[test]
    fn clip_and_contain() {
        let sq = ConvexPolygon::from_aabb(&Aabb::new(v(-1.0, -1.0), v(1.0, 1.0)).unwrap());
        let h = HalfPlane::new(v(1.0, 1.0), 0.0).unwrap();
        let tri = sq.clip(&h).unwrap();
        assert_eq!(tri.vertices().len(), 3);
        assert!((tri.area() - 2.0).abs() < 1e-12);
        assert!(tri.contains(&v(-0.5, -0.5)));
        assert!(!tri.contains(&v(0.5, 0.5)));
        assert!(tri.contains_disc(&v(-0.5, -0.5), 0.3));
        assert!(!tri.contains_disc(&v(-0.5, -0.5), 0.6));
        let away = HalfPlane::new(v(1.0, 0.0), -2.0).unwrap();
        assert!(sq.clip(&away).is_none());
    }

    #[test]
    fn half_plane_normalises() {
        let h = HalfPlane::new(v(3.0, 4.0), 10.0).unwrap();
        assert!((h.normal().norm() - 1.0).abs() < 1e-12);
        assert!((h.offset() - 2.0).abs() < 1e-12);
        assert_eq!(HalfPlane::new(v(0.0, 0.0), 1.0), Err(GeomError::ZeroNormal));
    }

    #[test]
    fn hull_of_collinear_points_is_a_segment() {
        let h = convex_hull(&[v(0.0, 0.0), v(1.0, 1.0), v(2.0, 2.0), v(1.0, 1.0)]);
        assert_eq!(h, vec![v(0.0, 0.0), v(2.0, 2.0)]);
        let h = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0), v(0.2, 0.2)]);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn closest_pair_between_hulls() {
        let a = convex_hull(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]);
        let b = Aabb::new(v(2.0, -1.0), v(3.0, 1.0)).unwrap().corners().to_vec();
        let (d, pa, pb) = closest_points_between_hulls(&a, &b).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert_eq!(pa, v(1.0, 0.0));
        assert!((pb - v(2.0, 0.0)).norm() < 1e-12);
        let inside = vec![v(2.5, 0.0)];
        assert!(closest_points_between_hulls(&inside, &b).is_none());
    }

    #[test]
    fn obstacle_distances() {
        let d = Obstacle::disc(v(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d.distance_to_point(&v(3.0, 0.0)), 2.0);
        assert_eq!(d.distance_to_point(&v(0.5, 0.0)), 0.0);
        assert_eq!(d.distance_to_segment(&v(-2.0, 2.0), &v(2.0, 2.0)), 1.0);
        let b = Obstacle::aabb(v(0.0, 0.0), v(1.0, 1.0)).unwrap();
        assert_eq!(b.distance_to_point(&v(2.0, 0.5)), 1.0);
        assert_eq!(b.distance_to_segment(&v(-1.0, 0.5), &v(2.0, 0.5)), 0.0);
        assert!((b.distance_to_segment(&v(2.0, 2.0), &v(3.0, 3.0)) - 2f64.sqrt()).abs() < 1e-12);
        assert!(Obstacle::disc(v(0.0, 0.0), 0.0).is_err());
        assert!(Obstacle::aabb(v(1.0, 0.0), v(0.0, 1.0)).is_err());
    }

    #[test]
    fn circle_cover_covers_every_point() {
        let pts: Vec<Vec2> = (0..50).map(|k| v(k as f64 * 0.05, (k as f64 * 0.3).sin())).collect();
        let discs = cover_points_with_discs(&pts, 0.2).unwrap();
        assert!(discs.len() < pts.len());
        for p in &pts {
            assert!(discs.iter().any(|d| (p - d.center).norm() <= d.radius));
        }
    }
}
