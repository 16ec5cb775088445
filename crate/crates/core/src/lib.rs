//! Exact triangle and k-clique counts under batches of edge insertions and
//! deletions.
//!
//! Counters:
//! - [`triangle::TriangleStore`]: degree-partitioned stores with a wedge table.
//! - [`baseline::MergeStore`]: sorted-merge plus inclusion-exclusion baseline.
//! - [`kclique_enum::KCliqueCounter`]: join of (k-2)-cliques with batch edges.
//! - [`kclique_mm::MmStore`]: clique-graph triangles, high core via Strassen.
//! - [`static_algos::StaticRecount`]: recounts from scratch every batch.
//!
//! All of them implement [`DynamicCounter`] and expect batches that went
//! through [`stream::normalize_batch`].

pub mod baseline;
pub mod error;
pub mod generate;
pub mod graph;
pub mod kclique_enum;
pub mod kclique_mm;
pub mod matmul;
pub mod neighbors;
pub(crate) mod par;
pub mod static_algos;
pub mod stream;
pub mod triangle;

pub use error::{Error, Result};
pub use graph::{Adjacency, EdgeKey, Graph, VertexId};
pub use stream::{normalize_batch, Batch, EdgeUpdate, UpdateKind};

/// Common interface of every counter. `apply_batch` takes a normalized batch
/// and returns the count after it.
pub trait DynamicCounter: Send {
    fn name(&self) -> &'static str;

    fn apply_batch(&mut self, batch: &Batch) -> Result<u64>;

    fn count(&self) -> u64;

    fn edge_count(&self) -> usize;

    /// Updates of the last batch that actually changed the edge set.
    fn last_applied(&self) -> usize;

    /// Corrupts the running count; used to exercise verification failure paths.
    #[doc(hidden)]
    fn perturb_count(&mut self, delta: i64);
}

pub(crate) fn offset_count(count: u64, delta: i64) -> u64 {
    (count as i64 + delta).max(0) as u64
}
