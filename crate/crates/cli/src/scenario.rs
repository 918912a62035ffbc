//! JSON scenario files.
//!
//! ```json
//! {
//!   "environment": {
//!     "workspace": [[0, 0], [10, 0], [10, 8], [0, 8]],
//!     "obstacles": [[[4, 3], [5, 3], [5, 4], [4, 4]]],
//!     "robot_radius": 0.25
//!   },
//!   "gains": { "k_v": 1.0, "k_omega": 1.5, "k_path": 1.0, "k_gov": 4.0 },
//!   "initial_pose": { "x": 1.0, "y": 1.0, "theta": 0.0 },
//!   "initial_governor": { "x": 1.0, "y": 1.0 },
//!   "path": [[1, 1], [9, 1], [9, 7]],
//!   "predictor": "tc",
//!   "integrator": { "dt": 0.01, "horizon": 120.0 },
//!   "output": { "snapshot_interval": 0.5 }
//! }
//! ```
//!
//! Only `environment`, `initial_pose` and `path` are required. The governor
//! starts at the robot position unless given. Unknown keys are rejected.

use serde::Deserialize;
use thiserror::Error;

use unicycle_core::environment::Environment;
use unicycle_core::geometry::{Point2, Polygon};
use unicycle_core::navigation::{NavGains, PathError, PathPolyline, Scenario, ScenarioError, SimSettings};
use unicycle_core::prediction::PredictorKind;
use unicycle_core::unicycle::Pose;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    pub workspace: Vec<[f64; 2]>,
    #[serde(default)]
    pub obstacles: Vec<Vec<[f64; 2]>>,
    pub robot_radius: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GainsSpec {
    pub k_v: f64,
    pub k_omega: f64,
    pub k_path: f64,
    pub k_gov: f64,
}

impl Default for GainsSpec {
    fn default() -> Self {
        let g = NavGains::default();
        Self {
            k_v: g.control.k_v,
            k_omega: g.control.k_omega,
            k_path: g.k_path,
            k_gov: g.k_gov,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSpec {
    pub dt: f64,
    pub horizon: f64,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        let s = SimSettings::default();
        Self {
            dt: s.dt,
            horizon: s.horizon,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Seconds between prediction-region snapshots in the scene drawing.
    pub snapshot_interval: f64,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            snapshot_interval: 0.5,
        }
    }
}

/// Raw scenario file contents.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub environment: EnvironmentSpec,
    #[serde(default)]
    pub gains: GainsSpec,
    pub initial_pose: PoseSpec,
    pub initial_governor: Option<PointSpec>,
    pub path: Vec<[f64; 2]>,
    #[serde(default = "default_predictor", deserialize_with = "predictor_from_label")]
    pub predictor: PredictorKind,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_predictor() -> PredictorKind {
    PredictorKind::TruncatedIceCream
}

fn predictor_from_label<'de, D: serde::Deserializer<'de>>(d: D) -> Result<PredictorKind, D::Error> {
    let label = String::deserialize(d)?;
    label.parse().map_err(serde::de::Error::custom)
}

#[derive(Debug, Error)]
pub enum ScenarioFileError {
    #[error("line {line}, column {column}: `{field}`: {message}")]
    Schema {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Validation(String),
}

fn point(p: [f64; 2]) -> Point2 {
    Point2::new(p[0], p[1])
}

/// A validated scenario ready to simulate.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub output: OutputSpec,
}

/// Parses and fully validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<LoadedScenario, ScenarioFileError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        ScenarioFileError::Schema {
            field,
            line: inner.line(),
            column: inner.column(),
            message: strip_position(&inner.to_string()),
        }
    })?;
    file.validate()
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

impl ScenarioFile {
    pub fn validate(&self) -> Result<LoadedScenario, ScenarioFileError> {
        let invalid = |m: String| ScenarioFileError::Validation(m);
        let env_spec = &self.environment;
        if !(env_spec.robot_radius > 0.0) {
            return Err(invalid("robot_radius must be positive".into()));
        }
        let workspace = Polygon::new(env_spec.workspace.iter().copied().map(point).collect())
            .map_err(|e| invalid(format!("workspace: {e}")))?;
        let obstacles = env_spec
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, o)| {
                Polygon::new(o.iter().copied().map(point).collect())
                    .map_err(|e| invalid(format!("obstacle {i}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let environment = Environment::new(workspace, obstacles, env_spec.robot_radius)
            .map_err(|e| invalid(e.to_string()))?;

        let g = &self.gains;
        let gains = NavGains::from_values(g.k_v, g.k_omega, g.k_path, g.k_gov)
            .map_err(|e| invalid(e.to_string()))?;

        let path = PathPolyline::new_in(self.path.iter().copied().map(point).collect(), &environment)
            .map_err(|e| match e {
                PathError::WaypointNotFree(i) => {
                    invalid(format!("path waypoint {i} is not in the free space interior"))
                }
                other => invalid(format!("path: {other}")),
            })?;

        let ip = self.initial_pose;
        let pose = Pose::new(Point2::new(ip.x, ip.y), ip.theta);
        let governor = self
            .initial_governor
            .map_or(pose.position, |g| Point2::new(g.x, g.y));
        if !pose.position.is_finite() || !ip.theta.is_finite() || !governor.is_finite() {
            return Err(invalid("initial pose and governor must be finite".into()));
        }

        let settings = SimSettings {
            dt: self.integrator.dt,
            horizon: self.integrator.horizon,
            ..SimSettings::default()
        };
        let scenario = Scenario::new(
            environment,
            path,
            gains,
            pose,
            governor,
            self.predictor,
            settings,
        )
        .map_err(|e| match e {
            ScenarioError::Path(PathError::WaypointNotFree(i)) => {
                invalid(format!("path waypoint {i} is not in the free space interior"))
            }
            other => invalid(other.to_string()),
        })?;
        check_initial_safety(&scenario)?;

        if !(self.output.snapshot_interval > 0.0) {
            return Err(invalid("output.snapshot_interval must be positive".into()));
        }
        Ok(LoadedScenario {
            scenario,
            output: self.output,
        })
    }
}

/// The governor may only start where the predicted motion toward it is safe.
pub fn check_initial_safety(scenario: &Scenario) -> Result<(), ScenarioFileError> {
    let sigma = scenario.safety_level(&scenario.initial_pose, scenario.initial_governor);
    if sigma > 0.0 {
        Ok(())
    } else {
        Err(ScenarioFileError::Validation(format!(
            "initial safety level must be positive (predictor {}, sigma = {sigma})",
            scenario.predictor.kind
        )))
    }
}
