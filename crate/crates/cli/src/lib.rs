//! Experiment orchestration for the coupled kicked-spin simulations: named
//! experiments, configuration handling, deterministic parallel ensemble
//! evolution, and CSV emission.

pub mod commands;
pub mod config;
pub mod csvout;
pub mod parallel;
pub mod run;
