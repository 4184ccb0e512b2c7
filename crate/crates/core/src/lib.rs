//! Planning closed patrol walks on vertex-weighted, edge-weighted graphs
//! that minimize the maximum weighted revisit time (importance times the
//! longest gap between visits).
//!
//! The pipeline: build a [`graph::MonitorGraph`], take its
//! [`graph::MetricGraph`] closure, run a planner from [`planner`], and
//! evaluate the resulting kernel with [`walk::walk_cost`]. Generators for
//! hard instance families live in [`gen`], exhaustive small-instance
//! references in [`oracle`].

pub mod error;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod planner;
pub mod tsp;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{MetricGraph, MonitorGraph, Vertex, WeightClasses};
pub use planner::{Algorithm, PlanConfig};
pub use walk::{BlockPlan, EvalReport, Walk};
