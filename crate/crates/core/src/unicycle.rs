//! Kinematic unicycle and its forward motion controller.
//!
//! The controller drives forward at a speed proportional to the goal offset
//! along the heading (never backwards) and turns proportionally to the
//! bearing of the goal.

use std::f64::consts::PI;

use thiserror::Error;

use crate::geometry::Point2;
use crate::ode::rk4_step;

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(angle: f64) -> f64 {
    let a = (angle + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid may round up to exactly 2π for tiny negative inputs.
    if a >= PI {
        a - 2.0 * PI
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Point2,
    /// Heading (rad) in `[-π, π)`.
    pub heading: f64,
}

impl Pose {
    pub fn new(position: Point2, heading: f64) -> Self {
        Self {
            position,
            heading: wrap_angle(heading),
        }
    }

    /// Unit vector along the heading.
    pub fn forward(&self) -> Point2 {
        Point2::from_angle(self.heading)
    }

    /// Unit vector to the left of the heading.
    pub fn left(&self) -> Point2 {
        self.forward().perp()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("control gains must be positive (k_v = {k_v}, k_omega = {k_omega})")]
pub struct GainError {
    pub k_v: f64,
    pub k_omega: f64,
}

/// Linear and angular velocity gains (1/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlGains {
    pub k_v: f64,
    pub k_omega: f64,
}

impl ControlGains {
    pub fn new(k_v: f64, k_omega: f64) -> Result<Self, GainError> {
        if k_v > 0.0 && k_omega > 0.0 && k_v.is_finite() && k_omega.is_finite() {
            Ok(Self { k_v, k_omega })
        } else {
            Err(GainError { k_v, k_omega })
        }
    }
}

impl Default for ControlGains {
    fn default() -> Self {
        Self {
            k_v: 1.0,
            k_omega: 1.5,
        }
    }
}

/// Forward speed (m/s, nonnegative) and turn rate (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    pub v: f64,
    pub omega: f64,
}

/// Time derivative of a pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseRate {
    pub dx: f64,
    pub dy: f64,
    pub dtheta: f64,
}

/// Goal offset along the heading, `oᵀ(θ)(g − x)`.
pub fn goal_alignment(pose: &Pose, goal: Point2) -> f64 {
    pose.forward().dot(goal - pose.position)
}

/// Signed lateral goal offset, `nᵀ(θ)(g − x)`.
pub fn signed_alignment_distance(pose: &Pose, goal: Point2) -> f64 {
    pose.left().dot(goal - pose.position)
}

/// Lateral distance of the goal from the heading line, `|nᵀ(θ)(g − x)|`.
pub fn perpendicular_alignment_distance(pose: &Pose, goal: Point2) -> f64 {
    signed_alignment_distance(pose, goal).abs()
}

/// Forward motion control toward `goal`; zero input exactly at the goal.
pub fn forward_control(pose: &Pose, goal: Point2, gains: &ControlGains) -> ControlInput {
    if pose.position == goal {
        return ControlInput::default();
    }
    let along = goal_alignment(pose, goal);
    let lateral = signed_alignment_distance(pose, goal);
    ControlInput {
        v: gains.k_v * along.max(0.0),
        omega: gains.k_omega * lateral.atan2(along),
    }
}

/// [`forward_control`] with the turn rate zeroed inside `capture_radius` of
/// the goal, which keeps the heading from chattering as the goal is reached.
pub fn forward_control_captured(
    pose: &Pose,
    goal: Point2,
    gains: &ControlGains,
    capture_radius: f64,
) -> ControlInput {
    let mut u = forward_control(pose, goal, gains);
    if pose.position.distance(goal) < capture_radius {
        u.omega = 0.0;
    }
    u
}

pub fn dynamics(pose: &Pose, u: &ControlInput) -> PoseRate {
    let o = pose.forward();
    PoseRate {
        dx: u.v * o.x,
        dy: u.v * o.y,
        dtheta: u.omega,
    }
}

/// One RK4 step of the closed loop toward a fixed goal; the heading is
/// re-wrapped afterwards.
pub fn closed_loop_step(pose: &Pose, goal: Point2, gains: &ControlGains, dt: f64) -> Pose {
    let state = [pose.position.x, pose.position.y, pose.heading];
    let next = rk4_step(&state, dt, |s| {
        let p = Pose {
            position: Point2::new(s[0], s[1]),
            heading: s[2],
        };
        let r = dynamics(&p, &forward_control(&p, goal, gains));
        [r.dx, r.dy, r.dtheta]
    });
    Pose::new(Point2::new(next[0], next[1]), next[2])
}

/// Sampled closed-loop trajectory toward a fixed goal.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoopTrajectory {
    pub times: Vec<f64>,
    pub poses: Vec<Pose>,
    /// True if the goal was captured before the horizon ran out.
    pub converged: bool,
}

/// Integrates the closed loop from `start` until the position is within
/// `capture_radius` of `goal` or `horizon` seconds have elapsed.
pub fn simulate_to_goal(
    start: Pose,
    goal: Point2,
    gains: &ControlGains,
    dt: f64,
    horizon: f64,
    capture_radius: f64,
) -> ClosedLoopTrajectory {
    let mut poses = vec![start];
    let mut times = vec![0.0];
    let max_steps = (horizon / dt).ceil() as usize;
    let mut pose = start;
    let mut converged = pose.position.distance(goal) < capture_radius;
    let mut step = 0;
    while !converged && step < max_steps {
        pose = closed_loop_step(&pose, goal, gains, dt);
        step += 1;
        poses.push(pose);
        times.push(step as f64 * dt);
        converged = pose.position.distance(goal) < capture_radius;
    }
    ClosedLoopTrajectory {
        times,
        poses,
        converged,
    }
}
