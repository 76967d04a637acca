//! Coincidence and common fixed points of relation-preserving mappings under
//! implicit contractive conditions.

pub mod catalog;
pub mod fuzz;
pub mod instance;
pub mod metric;
pub mod parallel;
pub mod relation;
pub mod sampled;
pub mod solver;
pub mod urysohn;
pub mod verify;
