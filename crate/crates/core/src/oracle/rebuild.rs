use std::sync::Arc;

use super::{Counter, DecrementalOracle, DeletionState, OracleCosts, Phase};
use crate::components::{label_components, ComponentLabeling};
use crate::error::Result;
use crate::graph::{Adjacency, VertexId};

/// Baseline oracle: relabels the survivor graph on every delete batch, so
/// updates cost `O(n + m)` probes and queries cost one probe.
pub struct RebuildOracle {
    graph: Arc<dyn Adjacency>,
    fresh: ComponentLabeling,
    updated: Option<ComponentLabeling>,
    state: DeletionState,
    preprocess: u64,
    update: u64,
    queries: Counter,
}

impl RebuildOracle {
    pub fn new(graph: Arc<dyn Adjacency>) -> Self {
        let n = graph.vertex_count();
        let (fresh, probes) = label_components(graph.as_ref(), &|_| true);
        RebuildOracle {
            graph,
            fresh,
            updated: None,
            state: DeletionState::new(n),
            preprocess: probes + n as u64,
            update: 0,
            queries: Counter::default(),
        }
    }

    fn labeling(&self) -> &ComponentLabeling {
        self.updated.as_ref().unwrap_or(&self.fresh)
    }
}

impl DecrementalOracle for RebuildOracle {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn phase(&self) -> Phase {
        self.state.phase
    }

    fn delete_batch(&mut self, deleted: &[VertexId]) -> Result<()> {
        self.state.apply(deleted)?;
        let mask = &self.state.deleted;
        let (labeling, probes) = label_components(self.graph.as_ref(), &|v| !mask[v]);
        self.update += probes + mask.len() as u64;
        self.updated = Some(labeling);
        Ok(())
    }

    fn query(&self, u: VertexId, v: VertexId) -> Result<bool> {
        self.state.check_endpoint(u)?;
        self.state.check_endpoint(v)?;
        self.queries.add(1);
        Ok(self.labeling().same_component(u, v))
    }

    fn reset(&mut self) {
        self.state.clear();
        self.updated = None;
        self.update = 0;
        self.queries.set(0);
    }

    fn costs(&self) -> OracleCosts {
        OracleCosts {
            preprocess: self.preprocess,
            update: self.update,
            query: self.queries.get(),
            space: 2 * self.vertex_count() as u64,
        }
    }
}
