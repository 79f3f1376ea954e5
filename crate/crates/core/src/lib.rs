pub mod action;
pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod enumerate;
pub mod geometry;
pub mod invariants;
pub mod render;
pub mod scenario_file;
