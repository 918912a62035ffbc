//! Planar primitives and the closed-set family used for motion prediction.
//!
//! Every set implements [`Shape`], which answers membership, point distance,
//! nearest point and segment distance queries. Convex sets answer them exactly
//! by case analysis; unions answer them part by part.

mod convex;
mod point;
mod polygon;
mod region;
mod union;

pub use convex::{Ball, BallConeIntersection, HalfPlane, IceCreamCone, SolidCone};
pub use point::{Point2, Segment};
pub use polygon::{Polygon, PolygonError};
pub use region::Region;
pub use union::{PaddedPolyline, Triangle, TruncatedIceCreamCone};

use thiserror::Error;

/// Default membership tolerance (m).
pub const CONTAINS_TOL: f64 = 1e-9;

/// Iteration cap of the segment line search.
const SEARCH_MAX_ITERS: usize = 100;
/// Parameter tolerance of the segment line search.
const SEARCH_PARAM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("metric projection is only defined for convex regions, got {0}")]
    NonConvex(&'static str),
}

/// Closest approach between a set and a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentQuery {
    /// Distance from the set to the segment (m).
    pub distance: f64,
    /// Segment parameter in `[0, 1]` of a closest segment point.
    pub param: f64,
}

impl SegmentQuery {
    fn min(self, other: SegmentQuery) -> SegmentQuery {
        if other.distance < self.distance {
            other
        } else {
            self
        }
    }
}

/// Distance and membership queries over a closed planar set.
pub trait Shape {
    /// True iff `p` lies in the set inflated by `tol`.
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.point_distance(p) <= tol
    }

    /// Euclidean distance from `p` to the set; zero inside.
    fn point_distance(&self, p: Point2) -> f64 {
        p.distance(self.closest_point(p))
    }

    /// A nearest point of the set to `p` (`p` itself when inside).
    fn closest_point(&self, p: Point2) -> Point2;

    /// Closest approach between the set and a segment.
    fn segment_query(&self, s: &Segment) -> SegmentQuery;

    fn segment_distance(&self, s: &Segment) -> f64 {
        self.segment_query(s).distance
    }

    /// A ball containing the set, `None` when the set is unbounded.
    fn bounding_ball(&self) -> Option<Ball>;
}

/// Minimizes a convex function of the position along `s`.
///
/// Golden-section flavour of ternary search: one new evaluation per iteration,
/// at most [`SEARCH_MAX_ITERS`] iterations, stops once the bracket is shorter
/// than [`SEARCH_PARAM_TOL`]. Endpoints are always evaluated so the result is
/// never worse than either end.
pub fn minimize_along_segment(s: &Segment, f: impl Fn(Point2) -> f64) -> SegmentQuery {
    let eval = |t: f64| f(s.point_at(t));
    let mut best = SegmentQuery {
        distance: eval(0.0),
        param: 0.0,
    };
    if best.distance <= 0.0 {
        return best;
    }
    best = best.min(SegmentQuery {
        distance: eval(1.0),
        param: 1.0,
    });
    if best.distance <= 0.0 || s.length() == 0.0 {
        return best;
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..SEARCH_MAX_ITERS {
        if f1 <= 0.0 {
            return SegmentQuery {
                distance: 0.0,
                param: x1,
            };
        }
        if f2 <= 0.0 {
            return SegmentQuery {
                distance: 0.0,
                param: x2,
            };
        }
        if hi - lo < SEARCH_PARAM_TOL {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    best.min(SegmentQuery {
        distance: f1,
        param: x1,
    })
    .min(SegmentQuery {
        distance: f2,
        param: x2,
    })
}
