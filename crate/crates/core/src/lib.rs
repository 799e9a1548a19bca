//! Augmenting-path structure of matchings in regular graphs.

pub mod blossom;
pub mod cuts;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod frontier;
pub mod generators;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{flip_augmenting, unmatched_fraction, AlternatingPath, Graph, Matching, Parity, SimpleGraph};
