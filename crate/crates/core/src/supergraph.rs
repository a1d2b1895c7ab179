use crate::components::DisjointSets;
use crate::error::Result;
use crate::graph::VertexId;

/// Graph on the activated set `I`: `u` and `v` are linked iff they are
/// connected via a connected component of the active graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperGraph {
    nodes: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    component: Vec<usize>,
    components: Vec<Vec<VertexId>>,
    pair_probes: u64,
}

impl SuperGraph {
    /// Probes `linked` once per unordered pair of `nodes` (which must be
    /// sorted and distinct) and labels the resulting components.
    pub(crate) fn build(
        nodes: Vec<VertexId>,
        mut linked: impl FnMut(VertexId, VertexId) -> Result<bool>,
    ) -> Result<Self> {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut edges = Vec::new();
        let mut sets = DisjointSets::new(nodes.len());
        let mut pair_probes = 0;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                pair_probes += 1;
                if linked(nodes[i], nodes[j])? {
                    edges.push((nodes[i], nodes[j]));
                    sets.union(i, j);
                }
            }
        }
        let groups = sets.groups();
        let mut component = vec![0; nodes.len()];
        let components = groups
            .iter()
            .enumerate()
            .map(|(c, group)| {
                group
                    .iter()
                    .map(|&i| {
                        component[i] = c;
                        nodes[i]
                    })
                    .collect()
            })
            .collect();
        Ok(SuperGraph {
            nodes,
            edges,
            component,
            components,
            pair_probes,
        })
    }

    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.nodes.binary_search(&v).ok().map(|i| self.component[i])
    }

    /// Number of pair checks made while building; always `C(|I|, 2)`.
    pub fn pair_probes(&self) -> u64 {
        self.pair_probes
    }
}
