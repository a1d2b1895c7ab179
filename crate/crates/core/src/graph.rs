//! Static undirected graphs and the augmented views built on top of them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::StatePartition;

/// Dense, zero-based vertex index.
pub type VertexId = usize;

/// Read access to an undirected adjacency structure.
///
/// Oracles are written against this trait so that the augmented graphs
/// `G[V_on ∪ {u}]` and `G[V_on ∪ {u, v}]` can share one copy of `G_on`.
pub trait Adjacency: Send + Sync {
    fn vertex_count(&self) -> usize;

    /// Calls `visit` once per neighbor of `v`.
    fn for_each_neighbor(&self, v: VertexId, visit: &mut dyn FnMut(VertexId));
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adjacency: Vec<Vec<VertexId>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Self-loops are dropped and parallel
    /// edges collapsed.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        Ok(Self::from_adjacency_unsorted(adjacency))
    }

    fn from_adjacency_unsorted(mut adjacency: Vec<Vec<VertexId>>) -> Self {
        let mut total = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Graph {
            adjacency,
            edge_count: total / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor(&self, v: VertexId, visit: &mut dyn FnMut(VertexId)) {
        for &w in &self.adjacency[v] {
            visit(w);
        }
    }
}

/// Translation between the ids of an induced subgraph and the original graph.
///
/// Local ids list the `V_on` vertices in increasing order, followed by the
/// extra vertices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdRemap {
    to_global: Vec<VertexId>,
    to_local: Vec<Option<VertexId>>,
}

impl IdRemap {
    fn new(n: usize, to_global: Vec<VertexId>) -> Self {
        let mut to_local = vec![None; n];
        for (local, &g) in to_global.iter().enumerate() {
            to_local[g] = Some(local);
        }
        IdRemap { to_global, to_local }
    }

    pub fn global(&self, local: VertexId) -> VertexId {
        self.to_global[local]
    }

    pub fn local(&self, global: VertexId) -> Option<VertexId> {
        self.to_local.get(global).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.to_global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_global.is_empty()
    }
}

fn sorted_extras(p: &StatePartition, extra: &[VertexId]) -> Result<Vec<VertexId>> {
    let mut extras = extra.to_vec();
    extras.sort_unstable();
    extras.dedup();
    for &x in &extras {
        if x >= p.n() {
            return Err(Error::VertexOutOfRange { vertex: x, n: p.n() });
        }
        if p.is_on(x) {
            return Err(Error::NotInitiallyOff(x));
        }
    }
    Ok(extras)
}

/// Materializes `G[V_on ∪ extra]` together with its id remapping.
pub fn induced_augmented(
    g: &Graph,
    p: &StatePartition,
    extra: &[VertexId],
) -> Result<(Graph, IdRemap)> {
    let extras = sorted_extras(p, extra)?;
    let mut to_global: Vec<VertexId> = p.on_vertices().to_vec();
    to_global.extend_from_slice(&extras);
    let remap = IdRemap::new(g.n(), to_global);

    let adjacency = (0..remap.len())
        .map(|local| {
            g.neighbors(remap.global(local))
                .iter()
                .filter_map(|&w| remap.local(w))
                .collect()
        })
        .collect();
    Ok((Graph::from_adjacency_unsorted(adjacency), remap))
}

/// `G_on` in local ids, shared by every augmented view.
#[derive(Debug, Clone)]
pub struct OnGraph {
    graph: Arc<Graph>,
    remap: IdRemap,
}

impl OnGraph {
    pub fn new(g: &Graph, p: &StatePartition) -> Self {
        let (graph, remap) =
            induced_augmented(g, p, &[]).expect("empty extra set is always valid");
        OnGraph {
            graph: Arc::new(graph),
            remap,
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn remap(&self) -> &IdRemap {
        &self.remap
    }

    /// Lazily augmented view `G[V_on ∪ extra]`; only the extra vertices'
    /// incident edges are stored.
    pub fn augment(&self, g: &Graph, p: &StatePartition, extra: &[VertexId]) -> Result<AugmentedGraph> {
        let extras = sorted_extras(p, extra)?;
        let base_n = self.graph.n();
        let extra_adj = extras
            .iter()
            .map(|&x| {
                let mut list: Vec<VertexId> = g
                    .neighbors(x)
                    .iter()
                    .filter_map(|&w| {
                        self.remap
                            .local(w)
                            .or_else(|| extras.iter().position(|&e| e == w).map(|i| base_n + i))
                    })
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Ok(AugmentedGraph {
            base: Arc::clone(&self.graph),
            extras,
            extra_adj,
        })
    }
}

/// `G_on` plus a handful of extra vertices, sharing the base adjacency.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    base: Arc<Graph>,
    extras: Vec<VertexId>,
    extra_adj: Vec<Vec<VertexId>>,
}

impl AugmentedGraph {
    /// Local id of the `i`-th extra vertex (extras sorted by global id).
    pub fn extra_local(&self, i: usize) -> VertexId {
        self.base.n() + i
    }

    pub fn extras(&self) -> &[VertexId] {
        &self.extras
    }

    pub fn to_graph(&self) -> Graph {
        let adjacency = (0..self.vertex_count())
            .map(|v| {
                let mut list = Vec::new();
                self.for_each_neighbor(v, &mut |w| list.push(w));
                list
            })
            .collect();
        Graph::from_adjacency_unsorted(adjacency)
    }
}

impl Adjacency for AugmentedGraph {
    fn vertex_count(&self) -> usize {
        self.base.n() + self.extras.len()
    }

    fn for_each_neighbor(&self, v: VertexId, visit: &mut dyn FnMut(VertexId)) {
        let base_n = self.base.n();
        if v < base_n {
            for &w in self.base.neighbors(v) {
                visit(w);
            }
            for (i, list) in self.extra_adj.iter().enumerate() {
                if list.binary_search(&v).is_ok() {
                    visit(base_n + i);
                }
            }
        } else {
            for &w in &self.extra_adj[v - base_n] {
                visit(w);
            }
        }
    }
}
