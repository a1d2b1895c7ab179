//! Subgraph connectivity with sensitivity.
//!
//! A graph's vertices start out activated or deactivated. After
//! preprocessing, one batch flips the state of a few vertices, connectivity
//! queries are answered over the activated vertices only, and the batch is
//! rolled back. Two structures are provided:
//!
//! * [`IncrementalIndex`]: activations only, `C(|I|, 2)` bit probes per
//!   update and at most `2|I|` per query;
//! * [`FullyDynamic`]: activations and deactivations, reduced to a
//!   pluggable [`DecrementalOracle`] over `G_on` and its one- and
//!   two-vertex augmentations.
//!
//! Both are checked against [`BruteForceReference`].

pub mod bench;
pub mod components;
pub mod doubling;
pub mod error;
pub mod format;
pub mod fully_dynamic;
pub mod generate;
pub mod graph;
pub mod incremental;
pub mod oracle;
pub mod partition;
pub mod run;
pub mod supergraph;
pub mod verify;

pub use components::{connected_components, ComponentId, ComponentLabeling};
pub use doubling::DoublingFamily;
pub use error::{Error, Result};
pub use fully_dynamic::{ActiveUpdate, FullyDynamic, SessionId};
pub use graph::{induced_augmented, Adjacency, Graph, IdRemap, VertexId};
pub use incremental::IncrementalIndex;
pub use oracle::{BruteForceReference, DecrementalOracle, OracleCosts, OracleKind, Phase};
pub use partition::{StatePartition, UpdateBatch};
pub use supergraph::SuperGraph;

/// `C(k, 2)`.
pub fn pairs(k: usize) -> u64 {
    (k as u64) * (k as u64).saturating_sub(1) / 2
}
