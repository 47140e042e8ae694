//! Command-line front end for the swingby maneuver models: planet catalog,
//! JSON configs, grid sweeps with a deterministic worker pool, and the CSV,
//! SVG, and manifest writers.

pub mod catalog;
pub mod config;
pub mod csvout;
pub mod heatmap;
pub mod manifest;
pub mod sweep;
