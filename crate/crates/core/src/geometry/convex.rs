use super::point::{Point2, Segment};
use super::{minimize_along_segment, SegmentQuery, Shape};

/// Closed Euclidean ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Point2,
    pub radius: f64,
}

impl Ball {
    pub const fn new(center: Point2, radius: f64) -> Self {
        Self { center, radius }
    }
}

impl Shape for Ball {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        p.distance(self.center) <= self.radius + tol
    }

    fn point_distance(&self, p: Point2) -> f64 {
        (p.distance(self.center) - self.radius).max(0.0)
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        let offset = p - self.center;
        let dist = offset.norm();
        if dist <= self.radius {
            p
        } else {
            self.center + offset * (self.radius / dist)
        }
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        let param = s.closest_param(self.center);
        SegmentQuery {
            distance: (s.point_at(param).distance(self.center) - self.radius).max(0.0),
            param,
        }
    }

    fn bounding_ball(&self) -> Option<Ball> {
        Some(*self)
    }
}

/// `{z : (toward - anchor)ᵀ(z - anchor) >= 0}`; the whole plane when `anchor == toward`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub anchor: Point2,
    pub toward: Point2,
}

impl HalfPlane {
    pub const fn new(anchor: Point2, toward: Point2) -> Self {
        Self { anchor, toward }
    }

    pub fn is_full_plane(&self) -> bool {
        self.anchor == self.toward
    }

    /// Signed distance to the boundary line, positive inside.
    fn signed_distance(&self, p: Point2) -> f64 {
        match (self.toward - self.anchor).normalized() {
            Some(normal) => normal.dot(p - self.anchor),
            None => f64::INFINITY,
        }
    }
}

impl Shape for HalfPlane {
    fn point_distance(&self, p: Point2) -> f64 {
        (-self.signed_distance(p)).max(0.0)
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        let Some(normal) = (self.toward - self.anchor).normalized() else {
            return p;
        };
        let sd = normal.dot(p - self.anchor);
        if sd >= 0.0 {
            p
        } else {
            p - normal * sd
        }
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        // Distance is affine along the segment until it hits zero.
        let (da, db) = (self.point_distance(s.a), self.point_distance(s.b));
        if da <= db {
            SegmentQuery { distance: da, param: 0.0 }
        } else {
            SegmentQuery { distance: db, param: 1.0 }
        }
    }

    fn bounding_ball(&self) -> Option<Ball> {
        None
    }
}

/// Shape of a cone after resolving its degenerate cases.
#[derive(Debug, Clone, Copy)]
enum ConeKind {
    /// Apex equals base and the clearance is zero.
    Point,
    /// The clearance ball swallows the apex.
    Plane,
    /// Wedge with unit axis `u`, left normal `n` and half-angle with the given sine and cosine.
    Wedge {
        u: Point2,
        n: Point2,
        sin: f64,
        cos: f64,
    },
}

/// Frame of a wedge: axial coordinate and unsigned lateral coordinate.
#[inline]
fn wedge_coords(apex: Point2, u: Point2, n: Point2, p: Point2) -> (f64, f64, f64) {
    let q = p - apex;
    let lateral = n.dot(q);
    (u.dot(q), lateral.abs(), if lateral < 0.0 { -1.0 } else { 1.0 })
}

/// Closed solid cone with the given apex, spanned by the ball of radius
/// `base_clearance` around `base`. A clearance equal to the apex-base distance
/// gives the half-plane facing the base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidCone {
    pub apex: Point2,
    pub base: Point2,
    pub base_clearance: f64,
}

impl SolidCone {
    pub const fn new(apex: Point2, base: Point2, base_clearance: f64) -> Self {
        Self {
            apex,
            base,
            base_clearance,
        }
    }

    fn kind(&self) -> ConeKind {
        let axis = self.base - self.apex;
        let d = axis.norm();
        let r = self.base_clearance;
        if r > d {
            ConeKind::Plane
        } else if d == 0.0 {
            ConeKind::Point
        } else {
            let u = axis / d;
            let sin = (r / d).min(1.0);
            ConeKind::Wedge {
                u,
                n: u.perp(),
                sin,
                cos: (1.0 - sin * sin).sqrt(),
            }
        }
    }

    /// Nonpositive inside; positive outside, growing with the angular excess.
    fn excess(&self, p: Point2) -> f64 {
        match self.kind() {
            ConeKind::Plane => f64::NEG_INFINITY,
            ConeKind::Point => p.distance(self.apex),
            ConeKind::Wedge { u, n, sin, cos } => {
                let (s, w, _) = wedge_coords(self.apex, u, n, p);
                w * cos - s * sin
            }
        }
    }

    /// Unit directions of the two boundary rays, `None` for degenerate cones.
    fn boundary_rays(&self) -> Option<[Point2; 2]> {
        match self.kind() {
            ConeKind::Wedge { u, n, sin, cos } => Some([u * cos + n * sin, u * cos - n * sin]),
            _ => None,
        }
    }
}

impl Shape for SolidCone {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.excess(p) <= 0.0 || self.point_distance(p) <= tol
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        match self.kind() {
            ConeKind::Plane => p,
            ConeKind::Point => self.apex,
            ConeKind::Wedge { u, n, sin, cos } => {
                let (s, w, side) = wedge_coords(self.apex, u, n, p);
                if w * cos - s * sin <= 0.0 {
                    return p;
                }
                let along = s * cos + w * sin;
                if along <= 0.0 {
                    self.apex
                } else {
                    self.apex + (u * cos + n * (side * sin)) * along
                }
            }
        }
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        minimize_along_segment(s, |p| self.point_distance(p))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        match self.kind() {
            ConeKind::Point => Some(Ball::new(self.apex, 0.0)),
            _ => None,
        }
    }
}

/// Convex hull of an apex point and a ball around the base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IceCreamCone {
    pub apex: Point2,
    pub base: Point2,
    pub base_radius: f64,
}

/// Resolved ice-cream cone: either the base ball (apex inside it) or a proper
/// hull with its two tangent points.
enum IceCreamKind {
    Ball(Ball),
    Hull {
        u: Point2,
        n: Point2,
        sin: f64,
        cos: f64,
        /// Axial coordinate of the tangency chord.
        chord: f64,
        tangents: [Point2; 2],
    },
}

impl IceCreamCone {
    pub const fn new(apex: Point2, base: Point2, base_radius: f64) -> Self {
        Self {
            apex,
            base,
            base_radius,
        }
    }

    pub fn base_ball(&self) -> Ball {
        Ball::new(self.base, self.base_radius)
    }

    fn kind(&self) -> IceCreamKind {
        let axis = self.base - self.apex;
        let d = axis.norm();
        let r = self.base_radius;
        if r >= d {
            return IceCreamKind::Ball(self.base_ball());
        }
        let u = axis / d;
        let n = u.perp();
        let sin = r / d;
        let cos = (1.0 - sin * sin).sqrt();
        let tangent_len = d * cos;
        IceCreamKind::Hull {
            u,
            n,
            sin,
            cos,
            chord: tangent_len * cos,
            tangents: [
                self.apex + (u * cos + n * sin) * tangent_len,
                self.apex + (u * cos - n * sin) * tangent_len,
            ],
        }
    }

    /// The two points where the hull leaves the base circle.
    pub fn tangent_points(&self) -> Option<[Point2; 2]> {
        match self.kind() {
            IceCreamKind::Hull { tangents, .. } => Some(tangents),
            IceCreamKind::Ball(_) => None,
        }
    }
}

impl Shape for IceCreamCone {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        let inside = match self.kind() {
            IceCreamKind::Ball(b) => b.contains(p, 0.0),
            IceCreamKind::Hull {
                u,
                n,
                sin,
                cos,
                chord,
                ..
            } => {
                let (s, w, _) = wedge_coords(self.apex, u, n, p);
                self.base_ball().contains(p, 0.0) || (w * cos - s * sin <= 0.0 && s <= chord)
            }
        };
        inside || self.point_distance(p) <= tol
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        match self.kind() {
            IceCreamKind::Ball(b) => b.closest_point(p),
            IceCreamKind::Hull {
                u,
                n,
                sin,
                cos,
                chord,
                tangents,
            } => {
                let ball = self.base_ball();
                let (s, w, _) = wedge_coords(self.apex, u, n, p);
                if ball.contains(p, 0.0) || (w * cos - s * sin <= 0.0 && s <= chord) {
                    return p;
                }
                // Outside: the projection lies on a tangent edge or on the far arc,
                // and every candidate below is a member of the hull.
                let candidates = [
                    Segment::new(self.apex, tangents[0]).closest_point(p),
                    Segment::new(self.apex, tangents[1]).closest_point(p),
                    ball.closest_point(p),
                ];
                nearest(p, &candidates)
            }
        }
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        minimize_along_segment(s, |p| self.point_distance(p))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        let d = self.base.distance(self.apex);
        Some(Ball::new(self.base, d.max(self.base_radius)))
    }
}

/// Intersection of a ball and a solid cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConeIntersection {
    pub ball: Ball,
    pub cone: SolidCone,
}

impl BallConeIntersection {
    pub const fn new(ball: Ball, cone: SolidCone) -> Self {
        Self { ball, cone }
    }

    fn feasibility_slack(&self) -> f64 {
        1e-12 * (1.0 + self.ball.radius + self.ball.center.norm() + self.cone.apex.norm())
    }

    fn inside(&self, p: Point2, slack: f64) -> bool {
        self.ball.contains(p, slack) && self.cone.excess(p) <= slack
    }

    /// Points where the cone boundary meets the ball boundary, plus the apex
    /// when it lies in the ball.
    fn corners(&self) -> Vec<Point2> {
        let mut out = Vec::with_capacity(5);
        let slack = self.feasibility_slack();
        let apex = self.cone.apex;
        if self.ball.contains(apex, slack) {
            out.push(apex);
        }
        if let Some(rays) = self.cone.boundary_rays() {
            let rel = apex - self.ball.center;
            let c = rel.norm_squared() - self.ball.radius * self.ball.radius;
            for e in rays {
                let b = e.dot(rel);
                let disc = b * b - c;
                if disc < 0.0 {
                    continue;
                }
                let root = disc.sqrt();
                for s in [-b - root, -b + root] {
                    if s >= 0.0 {
                        out.push(apex + e * s);
                    }
                }
            }
        }
        out
    }
}

impl Shape for BallConeIntersection {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.inside(p, 0.0) || self.point_distance(p) <= tol
    }

    /// Exact projection: a nearest point of the intersection is either the
    /// projection onto one set that happens to lie in the other, or one of the
    /// boundary crossing points.
    fn closest_point(&self, p: Point2) -> Point2 {
        if self.inside(p, 0.0) {
            return p;
        }
        let slack = self.feasibility_slack();
        let mut candidates = self.corners();
        let on_ball = self.ball.closest_point(p);
        if self.cone.excess(on_ball) <= slack {
            candidates.push(on_ball);
        }
        let on_cone = self.cone.closest_point(p);
        if self.ball.contains(on_cone, slack) {
            candidates.push(on_cone);
        }
        if candidates.is_empty() {
            // Empty intersection; fall back to the ball.
            return on_ball;
        }
        nearest(p, &candidates)
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        minimize_along_segment(s, |p| self.point_distance(p))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        Some(self.ball)
    }
}

fn nearest(p: Point2, candidates: &[Point2]) -> Point2 {
    candidates
        .iter()
        .copied()
        .min_by(|a, b| p.distance(*a).total_cmp(&p.distance(*b)))
        .expect("nonempty candidate list")
}
