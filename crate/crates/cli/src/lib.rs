//! Scenario files, simulation output, and predictor comparison.

pub mod app;
pub mod compare;
pub mod output;
pub mod scenario;
pub mod svg;
