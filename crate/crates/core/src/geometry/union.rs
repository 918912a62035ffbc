use super::convex::Ball;
use super::point::{Point2, Segment};
use super::{minimize_along_segment, SegmentQuery, Shape};

/// Closed triangle; collinear vertices give the spanned segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [Point2; 3],
}

impl Triangle {
    pub const fn new(a: Point2, b: Point2, c: Point2) -> Self {
        Self {
            vertices: [a, b, c],
        }
    }

    pub fn edges(&self) -> [Segment; 3] {
        let [a, b, c] = self.vertices;
        [Segment::new(a, b), Segment::new(b, c), Segment::new(c, a)]
    }

    fn inside(&self, p: Point2) -> bool {
        let [a, b, c] = self.vertices;
        let area = (b - a).cross(c - a);
        if area == 0.0 {
            return false;
        }
        let d1 = (b - a).cross(p - a) * area.signum();
        let d2 = (c - b).cross(p - b) * area.signum();
        let d3 = (a - c).cross(p - c) * area.signum();
        d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0
    }
}

impl Shape for Triangle {
    fn closest_point(&self, p: Point2) -> Point2 {
        if self.inside(p) {
            return p;
        }
        self.edges()
            .iter()
            .map(|e| e.closest_point(p))
            .min_by(|a, b| p.distance(*a).total_cmp(&p.distance(*b)))
            .expect("three edges")
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        minimize_along_segment(s, |p| self.point_distance(p))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        let [a, b, c] = self.vertices;
        let center = (a + b + c) / 3.0;
        let radius = [a, b, c]
            .iter()
            .map(|v| v.distance(center))
            .fold(0.0, f64::max);
        Some(Ball::new(center, radius))
    }
}

/// Right triangle `conv(apex, base, foot)` joined with a ball around `base`,
/// where `foot` is the projection of `base` onto the heading line through
/// `apex` and the ball radius is the lateral offset of `base` from that line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedIceCreamCone {
    pub apex: Point2,
    pub base: Point2,
    /// Heading angle (rad) of the line through the apex.
    pub heading: f64,
}

impl TruncatedIceCreamCone {
    pub const fn new(apex: Point2, base: Point2, heading: f64) -> Self {
        Self {
            apex,
            base,
            heading,
        }
    }

    pub fn foot(&self) -> Point2 {
        let o = Point2::from_angle(self.heading);
        self.apex + o * o.dot(self.base - self.apex)
    }

    pub fn triangle(&self) -> Triangle {
        Triangle::new(self.apex, self.base, self.foot())
    }

    pub fn ball(&self) -> Ball {
        let n = Point2::from_angle(self.heading).perp();
        Ball::new(self.base, n.dot(self.base - self.apex).abs())
    }
}

impl Shape for TruncatedIceCreamCone {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.ball().contains(p, tol) || self.triangle().contains(p, tol)
    }

    fn point_distance(&self, p: Point2) -> f64 {
        self.ball()
            .point_distance(p)
            .min(self.triangle().point_distance(p))
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        let (from_ball, from_tri) = (
            self.ball().closest_point(p),
            self.triangle().closest_point(p),
        );
        if p.distance(from_ball) <= p.distance(from_tri) {
            from_ball
        } else {
            from_tri
        }
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        let ball = self.ball().segment_query(s);
        if ball.distance == 0.0 {
            return ball;
        }
        ball.min(self.triangle().segment_query(s))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        Some(Ball::new(self.base, self.base.distance(self.apex)))
    }
}

/// Union of the `pad`-neighbourhoods of the polyline edges (capsules).
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedPolyline {
    pub points: Vec<Point2>,
    pub pad: f64,
}

impl PaddedPolyline {
    /// `points` must be nonempty.
    pub fn new(points: Vec<Point2>, pad: f64) -> Self {
        assert!(!points.is_empty(), "padded polyline needs at least one point");
        Self { points, pad }
    }

    /// Edges of the polyline; a single point yields one degenerate segment.
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let single = (self.points.len() == 1).then(|| Segment::new(self.points[0], self.points[0]));
        single
            .into_iter()
            .chain(self.points.windows(2).map(|w| Segment::new(w[0], w[1])))
    }

    fn nearest_on_polyline(&self, p: Point2) -> Point2 {
        self.segments()
            .map(|s| s.closest_point(p))
            .min_by(|a, b| p.distance(*a).total_cmp(&p.distance(*b)))
            .expect("nonempty polyline")
    }
}

impl Shape for PaddedPolyline {
    fn point_distance(&self, p: Point2) -> f64 {
        (p.distance(self.nearest_on_polyline(p)) - self.pad).max(0.0)
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        let q = self.nearest_on_polyline(p);
        let dist = p.distance(q);
        if dist <= self.pad {
            p
        } else {
            q + (p - q) * (self.pad / dist)
        }
    }

    /// Exact segment-segment distances per capsule, pruned by a bounding-box gap.
    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        let mut best = SegmentQuery {
            distance: f64::INFINITY,
            param: 0.0,
        };
        let (slo, shi) = seg_bounds(s);
        for edge in self.segments() {
            let (elo, ehi) = seg_bounds(&edge);
            let gap_x = (elo.x - shi.x).max(slo.x - ehi.x).max(0.0);
            let gap_y = (elo.y - shi.y).max(slo.y - ehi.y).max(0.0);
            if gap_x.hypot(gap_y) - self.pad >= best.distance {
                continue;
            }
            let (t, u) = s.closest_params(&edge);
            let d = (s.point_at(t).distance(edge.point_at(u)) - self.pad).max(0.0);
            if d < best.distance {
                best = SegmentQuery { distance: d, param: t };
                if d == 0.0 {
                    break;
                }
            }
        }
        best
    }

    fn bounding_ball(&self) -> Option<Ball> {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for q in &self.points {
            lo = Point2::new(lo.x.min(q.x), lo.y.min(q.y));
            hi = Point2::new(hi.x.max(q.x), hi.y.max(q.y));
        }
        let center = lo.lerp(hi, 0.5);
        let radius = self
            .points
            .iter()
            .map(|q| q.distance(center))
            .fold(0.0, f64::max);
        Some(Ball::new(center, radius + self.pad))
    }
}

fn seg_bounds(s: &Segment) -> (Point2, Point2) {
    (
        Point2::new(s.a.x.min(s.b.x), s.a.y.min(s.b.y)),
        Point2::new(s.a.x.max(s.b.x), s.a.y.max(s.b.y)),
    )
}
