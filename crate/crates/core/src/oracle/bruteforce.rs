use std::collections::VecDeque;
use std::sync::Arc;

use super::{Counter, DecrementalOracle, DeletionState, OracleCosts, Phase};
use crate::error::Result;
use crate::graph::{Adjacency, VertexId};

/// Oracle with no preprocessing: each query runs a BFS over the survivors.
pub struct BruteForceOracle {
    graph: Arc<dyn Adjacency>,
    state: DeletionState,
    update: u64,
    queries: Counter,
}

impl BruteForceOracle {
    pub fn new(graph: Arc<dyn Adjacency>) -> Self {
        let n = graph.vertex_count();
        BruteForceOracle {
            graph,
            state: DeletionState::new(n),
            update: 0,
            queries: Counter::default(),
        }
    }
}

impl DecrementalOracle for BruteForceOracle {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn phase(&self) -> Phase {
        self.state.phase
    }

    fn delete_batch(&mut self, deleted: &[VertexId]) -> Result<()> {
        self.state.apply(deleted)?;
        self.update += deleted.len() as u64;
        Ok(())
    }

    fn query(&self, u: VertexId, v: VertexId) -> Result<bool> {
        self.state.check_endpoint(u)?;
        self.state.check_endpoint(v)?;
        if u == v {
            self.queries.add(1);
            return Ok(true);
        }
        let deleted = &self.state.deleted;
        let mut seen = vec![false; deleted.len()];
        let mut queue = VecDeque::from([u]);
        seen[u] = true;
        let mut probes = 1u64;
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            self.graph.for_each_neighbor(x, &mut |w| {
                probes += 1;
                if !seen[w] && !deleted[w] {
                    seen[w] = true;
                    found |= w == v;
                    queue.push_back(w);
                }
            });
            if found {
                break;
            }
        }
        self.queries.add(probes);
        Ok(found)
    }

    fn reset(&mut self) {
        self.state.clear();
        self.update = 0;
        self.queries.set(0);
    }

    fn costs(&self) -> OracleCosts {
        OracleCosts {
            preprocess: 0,
            update: self.update,
            query: self.queries.get(),
            space: self.vertex_count() as u64,
        }
    }
}
