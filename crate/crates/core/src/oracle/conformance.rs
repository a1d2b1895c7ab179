//! Conformance checks that any [`DecrementalOracle`] must pass.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{BruteForceReference, DecrementalOracle, Phase};
use crate::error::Error;
use crate::graph::{Adjacency, Graph, VertexId};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConformanceReport {
    pub queries: u64,
    pub mismatches: u64,
    /// Human-readable description of the first failure.
    pub first_failure: Option<String>,
}

impl ConformanceReport {
    fn fail(&mut self, what: String) {
        self.mismatches += 1;
        self.first_failure.get_or_insert(what);
    }

    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn compare_all_pairs(
    oracle: &dyn DecrementalOracle,
    g: &Graph,
    alive: &FixedBitSet,
    stage: &str,
    report: &mut ConformanceReport,
) {
    let truth = BruteForceReference::new(g, alive).labeling();
    for u in alive.ones() {
        for v in alive.ones().filter(|&v| v >= u) {
            report.queries += 1;
            match oracle.query(u, v) {
                Ok(ans) if ans == truth.same_component(u, v) => {}
                other => report.fail(format!("{stage}: query({u},{v}) returned {other:?}")),
            }
        }
    }
}

/// Runs the fresh / delete / reset protocol on an oracle built by `make`.
pub fn check_oracle(
    make: impl Fn(Arc<dyn Adjacency>) -> Box<dyn DecrementalOracle>,
    g: &Graph,
    deleted: &[VertexId],
) -> ConformanceReport {
    let mut report = ConformanceReport::default();
    let mut oracle = make(Arc::new(g.clone()));
    let mut all = FixedBitSet::with_capacity(g.n());
    all.insert_range(..);

    compare_all_pairs(oracle.as_ref(), g, &all, "fresh", &mut report);

    if let Err(e) = oracle.delete_batch(deleted) {
        report.fail(format!("delete_batch({deleted:?}) failed: {e}"));
        return report;
    }
    if oracle.phase() != Phase::Updated {
        report.fail("phase is not Updated after delete_batch".into());
    }
    let mut alive = all.clone();
    for &v in deleted {
        alive.set(v, false);
    }
    compare_all_pairs(oracle.as_ref(), g, &alive, "after delete", &mut report);
    for &v in deleted {
        if oracle.query(v, v) != Err(Error::QueryOnDeleted(v)) {
            report.fail(format!("query on deleted vertex {v} was not rejected"));
        }
    }
    if oracle.delete_batch(&[]) != Err(Error::OracleAlreadyUpdated) {
        report.fail("second delete_batch without reset was accepted".into());
    }

    oracle.reset();
    if oracle.phase() != Phase::Fresh {
        report.fail("phase is not Fresh after reset".into());
    }
    compare_all_pairs(oracle.as_ref(), g, &all, "after reset", &mut report);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::OracleKind;

    #[test]
    fn builtin_factories_conform_on_small_graph() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]).unwrap();
        for kind in OracleKind::ALL {
            for deleted in [&[][..], &[1], &[1, 4], &[0, 3, 5]] {
                let r = check_oracle(|a| kind.build(a), &g, deleted);
                assert!(r.passed(), "{kind} {deleted:?}: {:?}", r.first_failure);
            }
        }
    }

    struct IgnoresDeletions(Box<dyn DecrementalOracle>);

    impl DecrementalOracle for IgnoresDeletions {
        fn vertex_count(&self) -> usize {
            self.0.vertex_count()
        }
        fn phase(&self) -> Phase {
            self.0.phase()
        }
        fn delete_batch(&mut self, _: &[VertexId]) -> crate::error::Result<()> {
            self.0.delete_batch(&[])
        }
        fn query(&self, u: VertexId, v: VertexId) -> crate::error::Result<bool> {
            self.0.query(u, v)
        }
        fn reset(&mut self) {
            self.0.reset()
        }
        fn costs(&self) -> super::super::OracleCosts {
            self.0.costs()
        }
    }

    #[test]
    fn detects_a_broken_oracle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = check_oracle(|a| Box::new(IgnoresDeletions(OracleKind::Rebuild.build(a))), &g, &[1]);
        assert!(!r.passed());
    }
}
