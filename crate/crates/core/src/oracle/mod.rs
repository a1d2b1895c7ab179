//! Decremental subgraph-connectivity oracles.
//!
//! An oracle is preprocessed on a graph in which every vertex is active,
//! receives a single batch of vertex deletions, answers queries, and is then
//! reset to its preprocessed state. Costs are tracked as abstract probe
//! counters so that complexity claims can be asserted exactly.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, VertexId};

mod bruteforce;
pub mod conformance;
mod paths;
mod rebuild;
mod reference;

pub use bruteforce::BruteForceOracle;
pub use paths::{connected_by_set, connected_via_component};
pub use rebuild::RebuildOracle;
pub use reference::BruteForceReference;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Fresh,
    Updated,
}

/// Cost counters in elementary probes (`t_p`, `t_u`, `t_q`) and storage cells.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCosts {
    pub preprocess: u64,
    pub update: u64,
    pub query: u64,
    pub space: u64,
}

/// Contract for a decremental connectivity oracle with sensitivity.
///
/// `delete_batch` may be called once per cycle; a second call before
/// `reset` fails with [`Error::OracleAlreadyUpdated`]. Queries are allowed
/// in both phases and take `&self` so that readers can share an oracle.
pub trait DecrementalOracle: Send + Sync {
    fn vertex_count(&self) -> usize;

    fn phase(&self) -> Phase;

    fn delete_batch(&mut self, deleted: &[VertexId]) -> Result<()>;

    fn query(&self, u: VertexId, v: VertexId) -> Result<bool>;

    fn reset(&mut self);

    fn costs(&self) -> OracleCosts;
}

/// Registered oracle factories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    /// Recomputes a component labeling of the survivor graph on delete.
    Rebuild,
    /// Answers every query with a fresh breadth-first search.
    BruteForce,
}

impl OracleKind {
    pub const ALL: [OracleKind; 2] = [OracleKind::Rebuild, OracleKind::BruteForce];

    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Rebuild => "rebuild",
            OracleKind::BruteForce => "bruteforce",
        }
    }

    /// Whether the factory's structure depends on the sensitivity bound.
    pub fn depends_on_sensitivity(self) -> bool {
        false
    }

    pub fn build(self, graph: Arc<dyn Adjacency>) -> Box<dyn DecrementalOracle> {
        match self {
            OracleKind::Rebuild => Box::new(RebuildOracle::new(graph)),
            OracleKind::BruteForce => Box::new(BruteForceOracle::new(graph)),
        }
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rebuild" => Ok(OracleKind::Rebuild),
            "bruteforce" => Ok(OracleKind::BruteForce),
            other => Err(Error::UnknownOracle(other.to_string())),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deletion bookkeeping shared by the oracle implementations.
#[derive(Debug)]
struct DeletionState {
    deleted: Vec<bool>,
    touched: Vec<VertexId>,
    phase: Phase,
}

impl DeletionState {
    fn new(n: usize) -> Self {
        DeletionState {
            deleted: vec![false; n],
            touched: Vec::new(),
            phase: Phase::Fresh,
        }
    }

    fn apply(&mut self, batch: &[VertexId]) -> Result<()> {
        if self.phase == Phase::Updated {
            return Err(Error::OracleAlreadyUpdated);
        }
        let n = self.deleted.len();
        if let Some(&v) = batch.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        for &v in batch {
            if !self.deleted[v] {
                self.deleted[v] = true;
                self.touched.push(v);
            }
        }
        self.phase = Phase::Updated;
        Ok(())
    }

    fn clear(&mut self) {
        for v in self.touched.drain(..) {
            self.deleted[v] = false;
        }
        self.phase = Phase::Fresh;
    }

    fn check_endpoint(&self, v: VertexId) -> Result<()> {
        match self.deleted.get(v) {
            None => Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.deleted.len(),
            }),
            Some(true) => Err(Error::QueryOnDeleted(v)),
            Some(false) => Ok(()),
        }
    }
}

/// Query counter usable through `&self`.
#[derive(Debug, Default)]
struct Counter(AtomicU64);

impl Counter {
    fn add(&self, x: u64) {
        self.0.fetch_add(x, Ordering::Relaxed);
    }

    fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    fn set(&self, x: u64) {
        self.0.store(x, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn p5() -> Arc<dyn Adjacency> {
        Arc::new(Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap())
    }

    #[test]
    fn factory_names_round_trip() {
        for kind in OracleKind::ALL {
            assert_eq!(kind.name().parse::<OracleKind>().unwrap(), kind);
        }
        assert_eq!(
            "duan-pettie".parse::<OracleKind>().unwrap_err(),
            Error::UnknownOracle("duan-pettie".into())
        );
    }

    #[test]
    fn examples_hold_for_every_factory() {
        for kind in OracleKind::ALL {
            let mut o = kind.build(p5());
            assert!(o.query(0, 4).unwrap());
            o.delete_batch(&[2]).unwrap();
            assert!(!o.query(0, 4).unwrap());
            assert!(o.query(0, 1).unwrap());
            assert!(o.query(3, 4).unwrap());
            assert!(!o.query(1, 3).unwrap());
            assert_eq!(o.query(2, 0).unwrap_err(), Error::QueryOnDeleted(2));
            assert_eq!(o.delete_batch(&[1]).unwrap_err(), Error::OracleAlreadyUpdated);
            o.reset();
            assert_eq!(o.phase(), Phase::Fresh);
            assert!(o.query(0, 4).unwrap());
            o.reset();
            assert!(o.query(0, 4).unwrap());
            o.delete_batch(&[1]).unwrap();
            assert!(!o.query(0, 2).unwrap());
        }
    }

    #[test]
    fn disjoint_edges_and_empty_graph() {
        let two: Arc<dyn Adjacency> = Arc::new(Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        let empty: Arc<dyn Adjacency> = Arc::new(Graph::empty(0));
        for kind in OracleKind::ALL {
            assert!(!kind.build(Arc::clone(&two)).query(0, 3).unwrap());
            let mut o = kind.build(Arc::clone(&empty));
            assert_eq!(o.vertex_count(), 0);
            o.delete_batch(&[]).unwrap();
            assert!(o.query(0, 0).is_err());
        }
    }

    #[test]
    fn empty_delete_keeps_answers() {
        for kind in OracleKind::ALL {
            let mut o = kind.build(p5());
            o.delete_batch(&[]).unwrap();
            assert_eq!(o.phase(), Phase::Updated);
            assert!(o.query(0, 4).unwrap());
        }
    }

    #[test]
    fn cycle_survives_single_deletion() {
        let c5: Arc<dyn Adjacency> =
            Arc::new(Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap());
        for kind in OracleKind::ALL {
            let mut o = kind.build(Arc::clone(&c5));
            o.delete_batch(&[1]).unwrap();
            assert!(o.query(0, 2).unwrap());
        }
    }

    #[test]
    fn unknown_vertex_in_batch() {
        for kind in OracleKind::ALL {
            let mut o = kind.build(p5());
            assert!(matches!(o.delete_batch(&[9]), Err(Error::VertexOutOfRange { vertex: 9, .. })));
            assert_eq!(o.phase(), Phase::Fresh);
        }
    }

    #[test]
    fn reset_rebases_counters() {
        for kind in OracleKind::ALL {
            let mut o = kind.build(p5());
            let base = o.costs();
            o.delete_batch(&[2]).unwrap();
            o.query(0, 1).unwrap();
            let after = o.costs();
            assert!(after.update >= base.update && after.query > base.query);
            o.reset();
            assert_eq!(o.costs(), base);
        }
    }
}
