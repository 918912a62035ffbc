//! Polygonal workspace with polygonal obstacles and a disk-shaped robot.
//!
//! The free space is the set of robot centers whose body disk fits inside the
//! workspace without touching an obstacle. Distances to its boundary are
//! taken to the original (un-eroded) boundary segments minus the robot radius.

use thiserror::Error;

use crate::geometry::{Point2, Polygon, Segment, Shape};

/// Boundary gaps at or below this are treated as touching.
const TOUCH_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvironmentError {
    #[error("robot_radius must be positive")]
    NonPositiveRadius,
    #[error("obstacle {0} extends outside the workspace bounding box")]
    ObstacleOutsideWorkspace(usize),
    #[error("gap of {gap:.6} m between {first} and {second} is narrower than the robot diameter")]
    NarrowGap {
        first: String,
        second: String,
        gap: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Environment {
    workspace: Polygon,
    obstacles: Vec<Polygon>,
    robot_radius: f64,
    segments: Vec<Segment>,
}

/// Safety level of a predicted motion set with a witness pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClearanceReport {
    /// Distance between the set and the free-space boundary (m), zero when unsafe.
    pub sigma: f64,
    /// Point of the set nearest to the free-space boundary.
    pub witness_region_point: Point2,
    /// Matching point on the free-space boundary.
    pub witness_boundary_point: Point2,
}

impl Environment {
    /// Validates the radius, obstacle placement, and the gap rule: any two
    /// boundaries either touch or stay more than one robot diameter apart.
    pub fn new(
        workspace: Polygon,
        obstacles: Vec<Polygon>,
        robot_radius: f64,
    ) -> Result<Self, EnvironmentError> {
        if !(robot_radius > 0.0) || !robot_radius.is_finite() {
            return Err(EnvironmentError::NonPositiveRadius);
        }
        let (lo, hi) = workspace.bounds();
        for (i, obs) in obstacles.iter().enumerate() {
            let (olo, ohi) = obs.bounds();
            if olo.x < lo.x || olo.y < lo.y || ohi.x > hi.x || ohi.y > hi.y {
                return Err(EnvironmentError::ObstacleOutsideWorkspace(i));
            }
        }
        let diameter = 2.0 * robot_radius;
        let narrow = |gap: f64| gap > TOUCH_TOL && gap <= diameter;
        for (i, obs) in obstacles.iter().enumerate() {
            let gap = obs.boundary_gap(&workspace);
            if narrow(gap) {
                return Err(EnvironmentError::NarrowGap {
                    first: format!("obstacle {i}"),
                    second: "the workspace boundary".into(),
                    gap,
                });
            }
            for (j, other) in obstacles.iter().enumerate().skip(i + 1) {
                let gap = obs.boundary_gap(other);
                if narrow(gap) {
                    return Err(EnvironmentError::NarrowGap {
                        first: format!("obstacle {i}"),
                        second: format!("obstacle {j}"),
                        gap,
                    });
                }
            }
        }
        let segments = workspace
            .edges()
            .chain(obstacles.iter().flat_map(|o| o.edges()))
            .collect();
        Ok(Self {
            workspace,
            obstacles,
            robot_radius,
            segments,
        })
    }

    pub fn workspace(&self) -> &Polygon {
        &self.workspace
    }

    pub fn obstacles(&self) -> &[Polygon] {
        &self.obstacles
    }

    pub fn robot_radius(&self) -> f64 {
        self.robot_radius
    }

    /// Workspace and obstacle edges.
    pub fn boundary_segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Distance from `p` to the nearest workspace or obstacle boundary, zero
    /// when `p` is outside the workspace or inside an obstacle.
    pub fn obstacle_distance(&self, p: Point2) -> f64 {
        if !self.workspace.contains(p) || self.obstacles.iter().any(|o| o.contains(p)) {
            return 0.0;
        }
        self.segments
            .iter()
            .map(|s| s.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Strict membership in the free space: boundary points count as unsafe.
    pub fn in_free_space(&self, p: Point2) -> bool {
        self.obstacle_distance(p) > self.robot_radius
    }

    /// Distance from `p` to the free-space boundary; zero outside the free space.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        (self.obstacle_distance(p) - self.robot_radius).max(0.0)
    }

    /// Safety level of a motion set predicted from `robot_pos`.
    pub fn region_clearance<S: Shape + ?Sized>(&self, region: &S, robot_pos: Point2) -> ClearanceReport {
        let unsafe_report = ClearanceReport {
            sigma: 0.0,
            witness_region_point: robot_pos,
            witness_boundary_point: robot_pos,
        };
        if !self.in_free_space(robot_pos) {
            return unsafe_report;
        }

        // Lower bounds from the bounding ball let most far segments be skipped.
        let bound = region.bounding_ball();
        let mut order: Vec<(f64, usize)> = self
            .segments
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let lb = bound.map_or(0.0, |b| b.segment_distance(s));
                (lb, i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut best = f64::INFINITY;
        let mut best_point = robot_pos;
        for (lb, i) in order {
            if lb >= best {
                break;
            }
            let seg = &self.segments[i];
            let q = region.segment_query(seg);
            if q.distance < best {
                best = q.distance;
                best_point = seg.point_at(q.param);
                if best == 0.0 {
                    break;
                }
            }
        }

        let sigma = best - self.robot_radius;
        if !(sigma > 0.0) {
            return unsafe_report;
        }
        let region_point = region.closest_point(best_point);
        let toward_region = (region_point - best_point)
            .normalized()
            .unwrap_or(Point2::ORIGIN);
        ClearanceReport {
            sigma,
            witness_region_point: region_point,
            witness_boundary_point: best_point + toward_region * self.robot_radius,
        }
    }
}
