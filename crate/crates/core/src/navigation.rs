//! Safe path following with a reference governor.
//!
//! The robot always steers toward the governor, a virtual first-order point
//! that pursues the navigation path but may only move as fast as the safety
//! level of the robot's predicted motion allows.

use thiserror::Error;

use crate::environment::Environment;
use crate::geometry::{Point2, Segment};
use crate::ode::rk4_step_from;
use crate::prediction::{Predictor, PredictorKind};
use crate::unicycle::{
    dynamics, forward_control_captured, ControlGains, ControlInput, GainError, Pose, PoseRate,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("a path needs at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("waypoint {0} is not finite")]
    NonFinite(usize),
    #[error("path has zero length")]
    ZeroLength,
    #[error("waypoint {0} is not in the free space interior")]
    WaypointNotFree(usize),
}

/// Polyline parameterized by normalized arc length `α ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    waypoints: Vec<Point2>,
    /// Normalized arc length at each waypoint.
    alphas: Vec<f64>,
    length: f64,
}

impl PathPolyline {
    pub fn new(waypoints: Vec<Point2>) -> Result<Self, PathError> {
        if waypoints.len() < 2 {
            return Err(PathError::TooFewWaypoints(waypoints.len()));
        }
        if let Some(i) = waypoints.iter().position(|w| !w.is_finite()) {
            return Err(PathError::NonFinite(i));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in waypoints.windows(2) {
            acc += w[0].distance(w[1]);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(PathError::ZeroLength);
        }
        let alphas = cumulative.iter().map(|c| c / acc).collect();
        Ok(Self {
            waypoints,
            alphas,
            length: acc,
        })
    }

    /// Like [`PathPolyline::new`], also requiring every waypoint to lie in
    /// the free space of `env`.
    pub fn new_in(waypoints: Vec<Point2>, env: &Environment) -> Result<Self, PathError> {
        let path = Self::new(waypoints)?;
        if let Some(i) = path.waypoints.iter().position(|&w| !env.in_free_space(w)) {
            return Err(PathError::WaypointNotFree(i));
        }
        Ok(path)
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point2 {
        *self.waypoints.last().expect("at least two waypoints")
    }

    pub fn segments(&self) -> impl ExactSizeIterator<Item = Segment> + DoubleEndedIterator + '_ {
        self.waypoints.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    /// Point at normalized arc length `alpha` (clamped to `[0, 1]`).
    pub fn point_at(&self, alpha: f64) -> Point2 {
        let alpha = alpha.clamp(0.0, 1.0);
        let i = self.alphas.partition_point(|&a| a <= alpha).clamp(1, self.waypoints.len() - 1);
        let (a0, a1) = (self.alphas[i - 1], self.alphas[i]);
        let t = if a1 > a0 { (alpha - a0) / (a1 - a0) } else { 1.0 };
        self.waypoints[i - 1].lerp(self.waypoints[i], t.clamp(0.0, 1.0))
    }

    /// Largest `α` with `‖γ(α) − center‖ ≤ radius`, if any.
    pub fn last_alpha_within(&self, center: Point2, radius: f64) -> Option<f64> {
        for (i, seg) in self.segments().enumerate().rev() {
            let len = seg.length();
            let t = if len == 0.0 {
                (seg.a.distance(center) <= radius).then_some(1.0)
            } else {
                let u = seg.direction() / len;
                let rel = center - seg.a;
                let along = u.dot(rel) / len;
                let off = u.cross(rel);
                let h2 = radius * radius - off * off;
                if h2 < 0.0 {
                    None
                } else {
                    let h = h2.sqrt() / len;
                    let (lo, hi) = (along - h, along + h);
                    (hi >= 0.0 && lo <= 1.0).then(|| hi.min(1.0))
                }
            };
            if let Some(t) = t {
                let (a0, a1) = (self.alphas[i], self.alphas[i + 1]);
                return Some(a0 + t * (a1 - a0));
            }
        }
        None
    }
}

/// Furthest path point within the free-space clearance of `g`, with a flag
/// telling whether such a point existed. Without one, `g` lies outside the
/// domain of the path pursuit planner and the path start is returned.
pub fn projected_path_goal_checked(path: &PathPolyline, env: &Environment, g: Point2) -> (Point2, bool) {
    match path.last_alpha_within(g, env.boundary_distance(g)) {
        Some(alpha) => (path.point_at(alpha), true),
        None => (path.start(), false),
    }
}

pub fn projected_path_goal(path: &PathPolyline, env: &Environment, g: Point2) -> Point2 {
    projected_path_goal_checked(path, env, g).0
}

/// Move-to-projected-path-goal reference field.
pub fn path_pursuit_field(path: &PathPolyline, env: &Environment, g: Point2, k_path: f64) -> Point2 {
    (projected_path_goal(path, env, g) - g) * k_path
}

/// Governor velocity: the field projected onto the ball of radius `sigma`,
/// scaled by `k_gov`.
pub fn governor_velocity(field: Point2, sigma: f64, k_gov: f64) -> Point2 {
    if !(sigma > 0.0) {
        return Point2::ORIGIN;
    }
    let n = field.norm();
    if n <= sigma {
        field * k_gov
    } else {
        field * (k_gov * sigma / n)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GainsError {
    #[error(transparent)]
    Control(#[from] GainError),
    #[error("k_path and k_gov must be positive (k_path = {k_path}, k_gov = {k_gov})")]
    Governor { k_path: f64, k_gov: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavGains {
    pub control: ControlGains,
    pub k_path: f64,
    pub k_gov: f64,
}

impl NavGains {
    pub fn new(control: ControlGains, k_path: f64, k_gov: f64) -> Result<Self, GainsError> {
        let ok = |k: f64| k > 0.0 && k.is_finite();
        if ok(k_path) && ok(k_gov) {
            Ok(Self {
                control,
                k_path,
                k_gov,
            })
        } else {
            Err(GainsError::Governor { k_path, k_gov })
        }
    }

    pub fn from_values(k_v: f64, k_omega: f64, k_path: f64, k_gov: f64) -> Result<Self, GainsError> {
        Self::new(ControlGains::new(k_v, k_omega)?, k_path, k_gov)
    }
}

impl Default for NavGains {
    fn default() -> Self {
        Self {
            control: ControlGains::default(),
            k_path: 1.0,
            k_gov: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub horizon: f64,
    /// Both robot and governor must be this close to the path end to finish.
    pub goal_tolerance: f64,
    /// Radius around the governor inside which the turn rate is zeroed.
    pub capture_radius: f64,
    /// Stop as soon as the goal is reached; otherwise run to the horizon.
    pub stop_at_goal: bool,
    /// A run is frozen once robot and governor both stay below
    /// `frozen_speed` for `frozen_window` seconds away from the goal.
    pub frozen_window: f64,
    pub frozen_speed: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            dt: 0.01,
            horizon: 120.0,
            goal_tolerance: 0.05,
            capture_radius: 1e-3,
            stop_at_goal: true,
            frozen_window: 1.0,
            frozen_speed: 1e-4,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("initial robot position is not in the free space")]
    RobotNotFree,
    #[error("initial governor position is not in the free space")]
    GovernorNotFree,
    #[error("dt and horizon must be positive (dt = {dt}, horizon = {horizon})")]
    BadIntegrator { dt: f64, horizon: f64 },
}

/// Everything a navigation run depends on.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub environment: Environment,
    pub path: PathPolyline,
    pub gains: NavGains,
    pub initial_pose: Pose,
    pub initial_governor: Point2,
    pub predictor: Predictor,
    pub settings: SimSettings,
}

impl Scenario {
    pub fn new(
        environment: Environment,
        path: PathPolyline,
        gains: NavGains,
        initial_pose: Pose,
        initial_governor: Point2,
        predictor: PredictorKind,
        settings: SimSettings,
    ) -> Result<Self, ScenarioError> {
        if !(settings.dt > 0.0 && settings.horizon > 0.0) {
            return Err(ScenarioError::BadIntegrator {
                dt: settings.dt,
                horizon: settings.horizon,
            });
        }
        if let Some(i) = path.waypoints().iter().position(|&w| !environment.in_free_space(w)) {
            return Err(PathError::WaypointNotFree(i).into());
        }
        if !environment.in_free_space(initial_pose.position) {
            return Err(ScenarioError::RobotNotFree);
        }
        if !environment.in_free_space(initial_governor) {
            return Err(ScenarioError::GovernorNotFree);
        }
        Ok(Self {
            environment,
            path,
            gains,
            initial_pose,
            initial_governor,
            predictor: Predictor::new(predictor, gains.control),
            settings,
        })
    }

    /// Same scenario with another predictor.
    pub fn with_predictor(&self, kind: PredictorKind) -> Self {
        let mut s = self.clone();
        s.predictor.kind = kind;
        s
    }

    pub fn goal(&self) -> Point2 {
        self.path.end()
    }

    /// Safety level of the predicted robot motion toward the governor.
    pub fn safety_level(&self, pose: &Pose, governor: Point2) -> f64 {
        let region = self.predictor.predict(pose, governor);
        self.environment.region_clearance(&region, pose.position).sigma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavState {
    pub pose: Pose,
    pub governor: Point2,
    pub time: f64,
}

impl NavState {
    fn to_array(self) -> [f64; 5] {
        let p = self.pose.position;
        [p.x, p.y, self.pose.heading, self.governor.x, self.governor.y]
    }
}

/// Right-hand side of the coupled robot-governor system, with the
/// intermediate quantities it was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavDerivative {
    pub pose_rate: PoseRate,
    pub governor_rate: Point2,
    pub sigma: f64,
    pub control: ControlInput,
    /// False when the governor has left the path pursuit domain.
    pub in_domain: bool,
}

impl NavDerivative {
    fn to_array(self) -> [f64; 5] {
        [
            self.pose_rate.dx,
            self.pose_rate.dy,
            self.pose_rate.dtheta,
            self.governor_rate.x,
            self.governor_rate.y,
        ]
    }
}

pub fn coupled_derivative(state: &NavState, scenario: &Scenario) -> NavDerivative {
    let pose = &state.pose;
    let g = state.governor;
    let control = forward_control_captured(
        pose,
        g,
        &scenario.gains.control,
        scenario.settings.capture_radius,
    );
    let sigma = scenario.safety_level(pose, g);
    let (target, in_domain) = projected_path_goal_checked(&scenario.path, &scenario.environment, g);
    let field = (target - g) * scenario.gains.k_path;
    NavDerivative {
        pose_rate: dynamics(pose, &control),
        governor_rate: governor_velocity(field, sigma, scenario.gains.k_gov),
        sigma,
        control,
        in_domain,
    }
}

/// One logged sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub gx: f64,
    pub gy: f64,
    pub sigma: f64,
    pub v: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    Reached,
    Horizon,
    Frozen,
}

impl TerminalStatus {
    pub fn label(self) -> &'static str {
        match self {
            TerminalStatus::Reached => "reached",
            TerminalStatus::Horizon => "horizon",
            TerminalStatus::Frozen => "frozen",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub rows: Vec<LogRow>,
    /// Governor speed at each logged row.
    pub governor_speeds: Vec<f64>,
    pub status: TerminalStatus,
    /// Logged rows at which the governor was outside the pursuit domain.
    pub domain_exits: usize,
    /// Time at which the goal was first reached, if it was.
    pub reached_at: Option<f64>,
}

impl TrajectoryLog {
    pub fn final_row(&self) -> &LogRow {
        self.rows.last().expect("a log has at least one row")
    }

    /// Mean forward speed over the run (m/s).
    pub fn mean_speed(&self) -> f64 {
        let rows = &self.rows;
        if rows.len() < 2 {
            return 0.0;
        }
        // Trapezoidal average over the logged time span.
        let mut integral = 0.0;
        for w in rows.windows(2) {
            integral += 0.5 * (w[0].v + w[1].v) * (w[1].t - w[0].t);
        }
        integral / (rows[rows.len() - 1].t - rows[0].t)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("initial safety level {sigma} is not positive")]
    UnsafeStart { sigma: f64 },
    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },
}

/// One RK4 step of the coupled system from `state`, where `d` is the
/// derivative at `state`. The new state carries time `time`.
pub fn advance(scenario: &Scenario, state: &NavState, d: &NavDerivative, time: f64) -> NavState {
    let next = rk4_step_from(&state.to_array(), &d.to_array(), scenario.settings.dt, |s| {
        let st = NavState {
            pose: Pose {
                position: Point2::new(s[0], s[1]),
                heading: s[2],
            },
            governor: Point2::new(s[3], s[4]),
            time: state.time,
        };
        coupled_derivative(&st, scenario).to_array()
    });
    NavState {
        pose: Pose::new(Point2::new(next[0], next[1]), next[2]),
        governor: Point2::new(next[3], next[4]),
        time,
    }
}

fn log_row(state: &NavState, d: &NavDerivative) -> LogRow {
    LogRow {
        t: state.time,
        x: state.pose.position.x,
        y: state.pose.position.y,
        theta: state.pose.heading,
        gx: state.governor.x,
        gy: state.governor.y,
        sigma: d.sigma,
        v: d.control.v,
        omega: d.control.omega,
    }
}

/// Fixed-step RK4 simulation of the coupled system.
pub fn simulate(scenario: &Scenario) -> Result<TrajectoryLog, SimError> {
    let settings = &scenario.settings;
    let dt = settings.dt;
    let goal = scenario.goal();
    let max_steps = (settings.horizon / dt).round() as usize;

    let mut state = NavState {
        pose: scenario.initial_pose,
        governor: scenario.initial_governor,
        time: 0.0,
    };
    let mut d = coupled_derivative(&state, scenario);
    if !(d.sigma > 0.0) {
        return Err(SimError::UnsafeStart { sigma: d.sigma });
    }

    let mut rows = Vec::with_capacity(max_steps.min(1 << 16) + 1);
    let mut governor_speeds = Vec::with_capacity(rows.capacity());
    let mut domain_exits = 0;
    let mut was_in_domain = true;
    let mut reached_at = None;
    let mut still_for = 0.0;
    let frozen_steps = (settings.frozen_window / dt).round().max(1.0) as usize;
    let mut still_steps = 0usize;
    let mut step = 0usize;

    let status = loop {
        rows.push(log_row(&state, &d));
        governor_speeds.push(d.governor_rate.norm());
        if !d.in_domain {
            domain_exits += 1;
            if was_in_domain {
                log::warn!("governor left the path pursuit domain at t = {:.3}", state.time);
            }
        }
        was_in_domain = d.in_domain;

        let reached = state.pose.position.distance(goal) < settings.goal_tolerance
            && state.governor.distance(goal) < settings.goal_tolerance;
        if reached && reached_at.is_none() {
            reached_at = Some(state.time);
        }
        if reached && settings.stop_at_goal {
            break TerminalStatus::Reached;
        }

        let still = d.control.v < settings.frozen_speed
            && d.governor_rate.norm() < settings.frozen_speed
            && !reached;
        still_steps = if still { still_steps + 1 } else { 0 };
        still_for = still_steps as f64 * dt;
        if still_steps > frozen_steps {
            break TerminalStatus::Frozen;
        }

        if step == max_steps {
            break if reached {
                TerminalStatus::Reached
            } else {
                TerminalStatus::Horizon
            };
        }

        step += 1;
        state = advance(scenario, &state, &d, step as f64 * dt);
        if !state.to_array().iter().all(|v| v.is_finite()) {
            return Err(SimError::NonFinite { t: state.time });
        }
        d = coupled_derivative(&state, scenario);
    };
    if status == TerminalStatus::Frozen {
        log::warn!("robot and governor stalled for {still_for:.2} s");
    }

    Ok(TrajectoryLog {
        rows,
        governor_speeds,
        status,
        domain_exits,
        reached_at,
    })
}
