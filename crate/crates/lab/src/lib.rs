//! Command-line laboratory for box dimensions and bad-set bounds of maps with
//! holes, built on `repeller-core`.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod svg;
