//! Label-map tooling for factorized multi-part scene parsing.
//!
//! A monolithic part label such as `cow left front lower leg` is split into an
//! object category, a root component (`lower leg`) and side components
//! (`left`, `front`). This crate converts ground-truth label maps into the five
//! factored maps (object, animate root, inanimate root, left/right,
//! front/back), merges factored predictions back into monolithic labels,
//! refines predictions object-by-object with padded zoom crops, and scores
//! results with mIOU/mAvg/sqIOU/sqAvg and proximity-graph matching.
//!
//! Networks are out of the picture: anything that would come from a model is
//! either a [`relabel::FactoredMaps`] value or a callback producing one.

pub mod cli;
pub mod error;
pub mod graphmatch;
pub mod izr;
pub mod merge;
pub mod metrics;
pub mod ontology;
pub mod raster;
pub mod relabel;
pub mod render;
pub mod synth;

pub use error::{Error, Result};
pub use ontology::{Group, LabelSet, Ontology, PartLabel, Side, SideSet};
pub use raster::{BBox, Component, Connectivity, LabelMap, Mask, ScoreMap, StructuringElement};
pub use relabel::FactoredMaps;
