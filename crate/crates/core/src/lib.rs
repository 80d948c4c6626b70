//! Realizability checks and explicit constructions for Reeb graphs of
//! smooth functions on closed 3-manifolds, with a labelled-graph model,
//! a surface algebra for level sets and an independent plan verifier.

pub mod catalog;
pub mod cli;
pub mod fuzz;
pub mod graph;
pub mod io;
pub mod planner;
pub mod realizability;
pub mod surface;
pub mod verifier;

pub use graph::{EdgeId, GoodFunction, LabeledGraph, VertexId};
pub use planner::{plan, ConstructionPlan, PlanError};
pub use realizability::{check, Coverage, RealizabilityReport};
pub use surface::SurfaceClass;
