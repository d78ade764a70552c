//! Multi-criteria ranking of sensor catalogs and Pareto-front quality scoring.
//!
//! The crate ranks a [`DecisionMatrix`] of alternatives with SAW, TOPSIS or
//! VIKOR, stratifies the same matrix into Pareto fronts, and measures how much
//! of each front a top-k selection captures (ONVGR). The [`experiment`] module
//! wires these together into a seeded factorial benchmark over synthetic
//! sensor catalogs.

pub mod catalog;
pub mod decision;
mod error;
pub mod experiment;
pub mod mcda;
pub mod metrics;
pub mod pareto;
pub mod seed;

pub use catalog::{CatalogSpec, FieldRanges, SensorDescription, SensorField};
pub use decision::{
    evaluate_objectives, select_top_k, CriterionSpec, DecisionMatrix, Direction, RankedList,
    ScorePolarity, WeightVector,
};
pub use error::{Error, Result};
pub use mcda::{rank_saw, rank_topsis, rank_vikor, Algorithm, NormalizedMatrix, VikorParams};
pub use metrics::{onvgr_per_front, summarize, BoxplotSummary, FrontOnvgr, OnvgrReport};
pub use pareto::{brute_force_fronts, dominates, pareto_fronts, ParetoStratification};
