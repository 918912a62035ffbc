//! Feedback motion prediction: closed sets that contain the entire future
//! trajectory of the closed-loop unicycle from a given pose toward a fixed goal.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geometry::{
    Ball, BallConeIntersection, HalfPlane, IceCreamCone, PaddedPolyline, Point2, Region,
    Segment, SegmentQuery, Shape, SolidCone, TruncatedIceCreamCone,
};
use crate::unicycle::{
    goal_alignment, perpendicular_alignment_distance, simulate_to_goal, ControlGains, Pose,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredictorKind {
    Ball,
    BoundedCone,
    IceCream,
    TruncatedIceCream,
    ForwardSim,
}

impl PredictorKind {
    pub const ALL: [PredictorKind; 5] = [
        PredictorKind::Ball,
        PredictorKind::BoundedCone,
        PredictorKind::IceCream,
        PredictorKind::TruncatedIceCream,
        PredictorKind::ForwardSim,
    ];

    /// Short label used on the command line and in reports.
    pub fn label(self) -> &'static str {
        match self {
            PredictorKind::Ball => "ball",
            PredictorKind::BoundedCone => "bc",
            PredictorKind::IceCream => "ic",
            PredictorKind::TruncatedIceCream => "tc",
            PredictorKind::ForwardSim => "fs",
        }
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown predictor `{0}` (expected one of ball, bc, ic, tc, fs)")]
pub struct UnknownPredictor(pub String);

impl FromStr for PredictorKind {
    type Err = UnknownPredictor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PredictorKind::ALL
            .into_iter()
            .find(|k| k.label() == s.trim())
            .ok_or_else(|| UnknownPredictor(s.to_string()))
    }
}

/// Ball around the goal, optionally cut by the unbounded cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedConePrediction {
    pub ball: Ball,
    /// Absent when the robot is heading away from the goal.
    pub cone: Option<SolidCone>,
}

impl BoundedConePrediction {
    fn with<R>(&self, f: impl FnOnce(&dyn Shape) -> R) -> R {
        match self.cone {
            Some(cone) => f(&BallConeIntersection::new(self.ball, cone)),
            None => f(&self.ball),
        }
    }
}

impl Shape for BoundedConePrediction {
    fn contains(&self, p: Point2, tol: f64) -> bool {
        self.with(|s| s.contains(p, tol))
    }

    fn point_distance(&self, p: Point2) -> f64 {
        self.with(|s| s.point_distance(p))
    }

    fn closest_point(&self, p: Point2) -> Point2 {
        self.with(|s| s.closest_point(p))
    }

    fn segment_query(&self, s: &Segment) -> SegmentQuery {
        self.with(|shape| shape.segment_query(s))
    }

    fn bounding_ball(&self) -> Option<Ball> {
        Some(self.ball)
    }
}

/// Lyapunov ball: the distance to the goal never increases.
pub fn predict_ball(pose: &Pose, goal: Point2) -> Region {
    Region::Ball(Ball::new(goal, pose.position.distance(goal)))
}

/// Unbounded conic prediction; a half-plane when heading away from the goal.
pub fn predict_unbounded(pose: &Pose, goal: Point2) -> Region {
    if goal_alignment(pose, goal) >= 0.0 {
        Region::SolidCone(SolidCone::new(
            pose.position,
            goal,
            perpendicular_alignment_distance(pose, goal),
        ))
    } else {
        Region::HalfPlane(HalfPlane::new(pose.position, goal))
    }
}

pub fn predict_bounded_cone(pose: &Pose, goal: Point2) -> BoundedConePrediction {
    let ball = Ball::new(goal, pose.position.distance(goal));
    let cone = (goal_alignment(pose, goal) >= 0.0).then(|| {
        SolidCone::new(pose.position, goal, perpendicular_alignment_distance(pose, goal))
    });
    BoundedConePrediction { ball, cone }
}

pub fn predict_ice_cream(pose: &Pose, goal: Point2) -> Region {
    if goal_alignment(pose, goal) >= 0.0 {
        Region::IceCreamCone(IceCreamCone::new(
            pose.position,
            goal,
            perpendicular_alignment_distance(pose, goal),
        ))
    } else {
        predict_ball(pose, goal)
    }
}

pub fn predict_truncated(pose: &Pose, goal: Point2) -> Region {
    if goal_alignment(pose, goal) >= 0.0 {
        Region::TruncatedIceCreamCone(TruncatedIceCreamCone::new(
            pose.position,
            goal,
            pose.heading,
        ))
    } else {
        predict_ball(pose, goal)
    }
}

/// Integration settings of the forward-simulation predictor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardSimSettings {
    pub dt: f64,
    pub horizon: f64,
    pub capture_radius: f64,
}

impl Default for ForwardSimSettings {
    fn default() -> Self {
        Self {
            dt: 0.01,
            horizon: 60.0,
            capture_radius: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSimPrediction {
    pub region: Region,
    /// False when the horizon ran out before the goal was captured.
    pub converged: bool,
}

/// Sampled closed-loop trajectory padded by the largest possible excursion
/// between samples, `k_v·‖g − x₀‖·dt/2`.
///
/// Inside the capture radius the turn rate is zero, so the robot rolls
/// straight to the foot of the goal on its heading line; that last leg is
/// appended to the samples.
pub fn predict_forward_sim(
    pose: &Pose,
    goal: Point2,
    gains: &ControlGains,
    settings: &ForwardSimSettings,
) -> ForwardSimPrediction {
    assert!(settings.dt > 0.0 && settings.horizon > 0.0, "dt and horizon must be positive");
    let traj = simulate_to_goal(
        *pose,
        goal,
        gains,
        settings.dt,
        settings.horizon,
        settings.capture_radius,
    );
    let pad = gains.k_v * pose.position.distance(goal) * settings.dt / 2.0;
    let mut points: Vec<Point2> = traj.poses.iter().map(|p| p.position).collect();
    if traj.converged {
        let last = traj.poses[traj.poses.len() - 1];
        let along = goal_alignment(&last, goal);
        if along > 0.0 {
            points.push(last.position + last.forward() * along);
        }
    }
    ForwardSimPrediction {
        region: Region::PaddedPolyline(PaddedPolyline::new(points, pad)),
        converged: traj.converged,
    }
}

/// Output of any of the five predictors.
#[derive(Debug, Clone, PartialEq)]
pub enum MotionPrediction {
    Region(Region),
    BoundedCone(BoundedConePrediction),
}

impl MotionPrediction {
    fn as_shape(&self) -> &dyn Shape {
        match self {
            MotionPrediction::Region(r) => r,
            MotionPrediction::BoundedCone(bc) => bc,
        }
    }
}

impl Shape for MotionPrediction {
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

/// A predictor kind bundled with what it needs to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predictor {
    pub kind: PredictorKind,
    pub gains: ControlGains,
    pub forward_sim: ForwardSimSettings,
}

impl Predictor {
    pub fn new(kind: PredictorKind, gains: ControlGains) -> Self {
        Self {
            kind,
            gains,
            forward_sim: ForwardSimSettings::default(),
        }
    }

    pub fn predict(&self, pose: &Pose, goal: Point2) -> MotionPrediction {
        match self.kind {
            PredictorKind::Ball => MotionPrediction::Region(predict_ball(pose, goal)),
            PredictorKind::BoundedCone => {
                MotionPrediction::BoundedCone(predict_bounded_cone(pose, goal))
            }
            PredictorKind::IceCream => MotionPrediction::Region(predict_ice_cream(pose, goal)),
            PredictorKind::TruncatedIceCream => {
                MotionPrediction::Region(predict_truncated(pose, goal))
            }
            PredictorKind::ForwardSim => {
                let fs = predict_forward_sim(pose, goal, &self.gains, &self.forward_sim);
                if !fs.converged {
                    log::debug!("forward simulation hit its horizon before capture");
                }
                MotionPrediction::Region(fs.region)
            }
        }
    }
}
