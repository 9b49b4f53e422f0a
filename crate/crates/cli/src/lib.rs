//! Support code shared by the `lindiff` binary and its tests.

pub mod config;
pub mod render;
