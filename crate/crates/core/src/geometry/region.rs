use super::convex::{Ball, HalfPlane, IceCreamCone, SolidCone};
use super::point::{Point2, Segment};
use super::union::{PaddedPolyline, TruncatedIceCreamCone};
use super::{GeometryError, SegmentQuery, Shape};

/// The closed sets a motion prediction can take.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Ball(Ball),
    HalfPlane(HalfPlane),
    SolidCone(SolidCone),
    IceCreamCone(IceCreamCone),
    TruncatedIceCreamCone(TruncatedIceCreamCone),
    PaddedPolyline(PaddedPolyline),
}

impl Region {
    pub fn name(&self) -> &'static str {
        match self {
            Region::Ball(_) => "ball",
            Region::HalfPlane(_) => "half-plane",
            Region::SolidCone(_) => "solid cone",
            Region::IceCreamCone(_) => "ice-cream cone",
            Region::TruncatedIceCreamCone(_) => "truncated ice-cream cone",
            Region::PaddedPolyline(_) => "padded polyline",
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(
            self,
            Region::TruncatedIceCreamCone(_) | Region::PaddedPolyline(_)
        )
    }

    /// Metric projection onto a convex region.
    ///
    /// Unions have no unique projection; query their parts instead.
    pub fn project(&self, p: Point2) -> Result<Point2, GeometryError> {
        if self.is_convex() {
            Ok(self.closest_point(p))
        } else {
            Err(GeometryError::NonConvex(self.name()))
        }
    }

    fn as_shape(&self) -> &dyn Shape {
        match self {
            Region::Ball(r) => r,
            Region::HalfPlane(r) => r,
            Region::SolidCone(r) => r,
            Region::IceCreamCone(r) => r,
            Region::TruncatedIceCreamCone(r) => r,
            Region::PaddedPolyline(r) => r,
        }
    }
}

impl Shape for Region {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.as_shape().contains(p, tol)
    }

    fn point_distance(&self, p: Point2) -> f64 {
        self.as_shape().point_distance(p)
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        self.as_shape().closest_point(p)
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        self.as_shape().segment_query(s)
    }

    fn bounding_ball(&self) -> Option<Ball> {
        self.as_shape().bounding_ball()
    }
}

impl From<Ball> for Region {
    fn from(b: Ball) -> Self {
        Region::Ball(b)
    }
}
