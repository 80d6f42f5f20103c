//! File formats, experiment persistence, plots and statistics around
//! `plasticoding-core`.

pub mod config;
pub mod develop;
pub mod evaluator;
pub mod experiment;
pub mod manifest;
pub mod report;
pub mod stats;
pub mod svg;
