use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::components::{connected_components, ComponentLabeling};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Ground truth: reachability in `G[active]` recomputed from scratch.
#[derive(Debug, Clone, Copy)]
pub struct BruteForceReference<'a> {
    g: &'a Graph,
    active: &'a FixedBitSet,
}

impl<'a> BruteForceReference<'a> {
    pub fn new(g: &'a Graph, active: &'a FixedBitSet) -> Self {
        BruteForceReference { g, active }
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        v < self.g.n() && self.active.contains(v)
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> Result<bool> {
        for x in [u, v] {
            self.g.check_vertex(x)?;
            if !self.active.contains(x) {
                return Err(Error::QueryOnInactive(x));
            }
        }
        let mut seen = FixedBitSet::with_capacity(self.g.n());
        seen.insert(u);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                return Ok(true);
            }
            for &w in self.g.neighbors(x) {
                if self.active.contains(w) && !seen.put(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(false)
    }

    /// All-pairs answers at once.
    pub fn labeling(&self) -> ComponentLabeling {
        connected_components(self.g, self.active)
    }
}
