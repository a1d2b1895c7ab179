//! Connected components of induced subgraphs.

use std::collections::VecDeque;
use std::mem;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, VertexId};

pub type ComponentId = usize;

/// Component labels over the active vertices of a graph.
///
/// Components are numbered by their smallest member vertex, so two
/// labelings of the same active subgraph are always identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    label: Vec<Option<ComponentId>>,
    members: Vec<Vec<VertexId>>,
}

impl ComponentLabeling {
    pub fn label(&self, v: VertexId) -> Option<ComponentId> {
        self.label.get(v).copied().flatten()
    }

    /// Number of components.
    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self, c: ComponentId) -> &[VertexId] {
        &self.members[c]
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.label(v).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.label.len()
    }

    pub fn check_component(&self, c: ComponentId) -> Result<()> {
        if c < self.k() {
            Ok(())
        } else {
            Err(Error::UnknownComponent { id: c, k: self.k() })
        }
    }

    pub fn same_component(&self, u: VertexId, v: VertexId) -> bool {
        match (self.label(u), self.label(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Labels the connected components of the subgraph induced by `alive`.
///
/// Returns the labeling and the number of adjacency probes performed.
pub fn label_components(
    g: &dyn Adjacency,
    alive: &dyn Fn(VertexId) -> bool,
) -> (ComponentLabeling, u64) {
    let n = g.vertex_count();
    let mut label = vec![None; n];
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    let mut probes = 0u64;
    for s in 0..n {
        if label[s].is_some() || !alive(s) {
            continue;
        }
        let id = members.len();
        let mut comp = vec![s];
        label[s] = Some(id);
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            g.for_each_neighbor(v, &mut |w| {
                probes += 1;
                if label[w].is_none() && alive(w) {
                    label[w] = Some(id);
                    comp.push(w);
                    queue.push_back(w);
                }
            });
        }
        comp.sort_unstable();
        members.push(comp);
    }
    (ComponentLabeling { label, members }, probes)
}

pub fn connected_components(g: &Graph, active: &FixedBitSet) -> ComponentLabeling {
    label_components(g, &|v| active.contains(v)).0
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let mut a = self.find(x);
        let mut b = self.find(y);
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Groups of elements, each sorted, ordered by smallest element.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let len = self.parent.len();
        let mut slot = vec![usize::MAX; len];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for x in 0..len {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(x);
        }
        groups
    }
}
