//! Feedback motion prediction for a kinematic unicycle driven by a forward
//! motion controller, and safe reference-governor navigation built on it.

pub mod geometry;
pub mod environment;
pub mod ode;
pub mod unicycle;
pub mod prediction;
pub mod navigation;
