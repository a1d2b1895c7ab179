//! Incremental subgraph connectivity: activations only.
//!
//! Preprocessing labels the components `C_1..C_k` of `G_on` and stores two
//! families of bit arrays:
//!
//! * `comp_adj[C]` (length `n_off`): off vertices adjacent to component `C`;
//! * for each off vertex `u`, `comp_part[u]` (length `k`): components adjacent
//!   to `u`, and `off_part[u]` (length `n_off`): off vertices connected to
//!   `u` via a component or by a direct edge.
//!
//! An update activating `I` probes `off_part` once per pair of `I` to build
//! the super-graph; a query scans the super-graph components once, probing
//! `comp_adj` of the two query components.

use fixedbitset::FixedBitSet;

use crate::components::{connected_components, ComponentId, ComponentLabeling};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::partition::{StatePartition, UpdateBatch};
use crate::supergraph::SuperGraph;

/// Deliberate construction faults, used to check that the verification
/// suites catch broken indexes.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum InjectedFault {
    #[default]
    None,
    /// Skip OR-ing `comp_adj` into `off_part`.
    SkipComponentOr,
    /// Skip direct off-to-off edges in `off_part`.
    SkipDirectOffEdges,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Edges inspected while filling `comp_adj` and `comp_part`.
    pub edge_probes: u64,
    /// Word-level OR operations while filling `off_part`.
    pub or_words: u64,
    /// Off-to-off edges OR-ed into `off_part` (each counted from both ends).
    pub direct_off_edges: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Logical bit probes into `comp_adj`.
    pub probes: u64,
}

#[derive(Debug, Clone)]
pub struct IncrementalIndex {
    partition: StatePartition,
    labeling: ComponentLabeling,
    comp_adj: Vec<FixedBitSet>,
    comp_part: Vec<FixedBitSet>,
    off_part: Vec<FixedBitSet>,
    stats: BuildStats,
}

enum Endpoint {
    On(ComponentId),
    Activated(usize),
}

impl IncrementalIndex {
    pub fn build(g: &Graph, p: &StatePartition) -> Self {
        Self::build_with_fault(g, p, InjectedFault::None)
    }

    #[doc(hidden)]
    pub fn build_with_fault(g: &Graph, p: &StatePartition, fault: InjectedFault) -> Self {
        let labeling = connected_components(g, p.on_mask());
        let k = labeling.k();
        let n_off = p.n_off();
        let mut comp_adj = vec![FixedBitSet::with_capacity(n_off); k];
        let mut comp_part = vec![FixedBitSet::with_capacity(k); n_off];
        let mut direct: Vec<Vec<usize>> = vec![Vec::new(); n_off];
        let mut stats = BuildStats::default();

        for (a, b) in g.edges() {
            stats.edge_probes += 1;
            match (labeling.label(a), labeling.label(b)) {
                (Some(c), None) | (None, Some(c)) => {
                    let off = if labeling.label(a).is_none() { a } else { b };
                    let j = p.off_index(off).expect("unlabeled vertex is off");
                    comp_adj[c].insert(j);
                    comp_part[j].insert(c);
                }
                (None, None) => {
                    let (i, j) = (p.off_index(a).unwrap(), p.off_index(b).unwrap());
                    direct[i].push(j);
                    direct[j].push(i);
                }
                (Some(_), Some(_)) => {}
            }
        }

        let words = comp_adj.first().map_or(0, |a| a.as_slice().len()) as u64;
        let off_part = (0..n_off)
            .map(|j| {
                let mut row = FixedBitSet::with_capacity(n_off);
                if fault != InjectedFault::SkipComponentOr {
                    for c in comp_part[j].ones() {
                        row.union_with(&comp_adj[c]);
                        stats.or_words += words;
                    }
                }
                if fault != InjectedFault::SkipDirectOffEdges {
                    for &i in &direct[j] {
                        row.insert(i);
                        stats.direct_off_edges += 1;
                    }
                }
                row.set(j, false);
                row
            })
            .collect();

        IncrementalIndex {
            partition: p.clone(),
            labeling,
            comp_adj,
            comp_part,
            off_part,
            stats,
        }
    }

    pub fn partition(&self) -> &StatePartition {
        &self.partition
    }

    pub fn labeling(&self) -> &ComponentLabeling {
        &self.labeling
    }

    pub fn comp_adj(&self, c: ComponentId) -> &FixedBitSet {
        &self.comp_adj[c]
    }

    /// Components adjacent to the off vertex with dense index `j`.
    pub fn comp_part(&self, j: usize) -> &FixedBitSet {
        &self.comp_part[j]
    }

    /// Off vertices connected to the off vertex with dense index `j`.
    pub fn off_part(&self, j: usize) -> &FixedBitSet {
        &self.off_part[j]
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    /// Machine words in one `comp_adj` array.
    pub fn words_per_off_array(&self) -> usize {
        self.comp_adj.first().map_or(0, |a| a.as_slice().len())
    }

    /// Builds the super-graph for an activation batch. The index itself is
    /// not modified, so rolling back means dropping the returned value.
    pub fn update(&self, batch: &UpdateBatch) -> Result<SuperGraph> {
        if !batch.deactivate().is_empty() {
            return Err(Error::DeactivationNotSupported(batch.deactivate().len()));
        }
        batch.validate(&self.partition)?;
        let p = &self.partition;
        SuperGraph::build(batch.activate().to_vec(), |u, v| {
            let (i, j) = (p.off_index(u).unwrap(), p.off_index(v).unwrap());
            Ok(self.off_part[i].contains(j))
        })
    }

    pub fn query(&self, sg: &SuperGraph, u: VertexId, v: VertexId) -> Result<bool> {
        self.query_with_stats(sg, u, v).map(|(ans, _)| ans)
    }

    pub fn query_with_stats(
        &self,
        sg: &SuperGraph,
        u: VertexId,
        v: VertexId,
    ) -> Result<(bool, QueryStats)> {
        let eu = self.endpoint(sg, u)?;
        let ev = self.endpoint(sg, v)?;
        let mut stats = QueryStats::default();
        let adj = |c: ComponentId, w: VertexId| {
            self.comp_adj[c].contains(self.partition.off_index(w).unwrap())
        };
        let ans = match (eu, ev) {
            (Endpoint::On(a), Endpoint::On(b)) if a == b => true,
            (Endpoint::On(a), Endpoint::On(b)) => sg.components().iter().any(|members| {
                let (mut reach_a, mut reach_b) = (false, false);
                for &w in members {
                    if !reach_a {
                        stats.probes += 1;
                        reach_a = adj(a, w);
                    }
                    if !reach_b {
                        stats.probes += 1;
                        reach_b = adj(b, w);
                    }
                    if reach_a && reach_b {
                        return true;
                    }
                }
                false
            }),
            (Endpoint::Activated(s), Endpoint::On(c)) | (Endpoint::On(c), Endpoint::Activated(s)) => {
                sg.components()[s].iter().any(|&w| {
                    stats.probes += 1;
                    adj(c, w)
                })
            }
            (Endpoint::Activated(s), Endpoint::Activated(t)) => s == t,
        };
        Ok((ans, stats))
    }

    fn endpoint(&self, sg: &SuperGraph, v: VertexId) -> Result<Endpoint> {
        if v >= self.partition.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.partition.n(),
            });
        }
        if let Some(c) = self.labeling.label(v) {
            return Ok(Endpoint::On(c));
        }
        sg.component_of(v)
            .map(Endpoint::Activated)
            .ok_or(Error::QueryOnInactive(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(b: &FixedBitSet) -> Vec<usize> {
        b.ones().collect()
    }

    fn p5() -> (Graph, StatePartition) {
        (
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap(),
            StatePartition::from_off(5, &[2]).unwrap(),
        )
    }

    fn activate(v: &[VertexId]) -> UpdateBatch {
        UpdateBatch::activate_only(v.to_vec()).unwrap()
    }

    #[test]
    fn p5_arrays() {
        let (g, p) = p5();
        let idx = IncrementalIndex::build(&g, &p);
        assert_eq!(idx.labeling().k(), 2);
        assert_eq!(bits(idx.comp_adj(0)), vec![0]);
        assert_eq!(bits(idx.comp_adj(1)), vec![0]);
        assert_eq!(bits(idx.comp_part(0)), vec![0, 1]);
        assert!(bits(idx.off_part(0)).is_empty());
    }

    #[test]
    fn off_part_through_component_and_direct_edge() {
        // u=0, a=1, b=2, v=3
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let p = StatePartition::from_off(4, &[0, 3]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        assert!(idx.off_part(0).contains(1));

        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let p = StatePartition::from_off(2, &[0, 1]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        assert!(idx.off_part(0).contains(1));
        assert!(idx.off_part(1).contains(0));
        let faulty = IncrementalIndex::build_with_fault(&g, &p, InjectedFault::SkipDirectOffEdges);
        assert!(!faulty.off_part(0).contains(1));
    }

    #[test]
    fn p5_updates_and_queries() {
        let (g, p) = p5();
        let idx = IncrementalIndex::build(&g, &p);
        let sg = idx.update(&activate(&[2])).unwrap();
        assert_eq!((sg.nodes().len(), sg.edges().len(), sg.component_count()), (1, 0, 1));
        assert!(idx.query(&sg, 0, 4).unwrap());
        let (same, stats) = idx.query_with_stats(&sg, 0, 1).unwrap();
        assert!(same);
        assert_eq!(stats.probes, 0);

        let empty = idx.update(&activate(&[])).unwrap();
        assert!(!idx.query(&empty, 0, 4).unwrap());
        assert_eq!(idx.query(&empty, 2, 0).unwrap_err(), Error::QueryOnInactive(2));
    }

    #[test]
    fn star_leaves_share_component() {
        // component {0}; off leaves 1 and 2 both adjacent to it
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let p = StatePartition::from_off(3, &[1, 2]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        let sg = idx.update(&activate(&[1, 2])).unwrap();
        assert_eq!(sg.edges(), &[(1, 2)]);
        assert_eq!(sg.component_count(), 1);
    }

    #[test]
    fn three_unrelated_off_vertices() {
        let g = Graph::from_edges(6, &[(3, 0), (4, 1), (5, 2)]).unwrap();
        let p = StatePartition::from_off(6, &[3, 4, 5]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        let sg = idx.update(&activate(&[3, 4, 5])).unwrap();
        assert_eq!(sg.pair_probes(), 3);
        assert!(sg.edges().is_empty());
        assert_eq!(sg.component_count(), 3);
    }

    #[test]
    fn chain_through_third_component() {
        // A={0}, B={1}, X={2}; u=3 links A-X, w=4 links X-B
        let g = Graph::from_edges(5, &[(0, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        let p = StatePartition::from_off(5, &[3, 4]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        let both = idx.update(&activate(&[3, 4])).unwrap();
        assert!(idx.query(&both, 0, 1).unwrap());
        let one = idx.update(&activate(&[3])).unwrap();
        assert!(!idx.query(&one, 0, 1).unwrap());
    }

    #[test]
    fn activated_endpoints() {
        let g = Graph::from_edges(5, &[(0, 3), (3, 2), (2, 4), (4, 1)]).unwrap();
        let p = StatePartition::from_off(5, &[3, 4]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        let sg = idx.update(&activate(&[3, 4])).unwrap();
        assert!(idx.query(&sg, 3, 1).unwrap());
        assert!(idx.query(&sg, 3, 4).unwrap());
        let one = idx.update(&activate(&[3])).unwrap();
        assert!(idx.query(&one, 3, 2).unwrap());
        assert!(!idx.query(&one, 3, 1).unwrap());
        assert_eq!(idx.query(&one, 3, 4).unwrap_err(), Error::QueryOnInactive(4));
    }

    #[test]
    fn rejects_illegal_batches() {
        let (g, p) = p5();
        let idx = IncrementalIndex::build(&g, &p);
        let b = UpdateBatch::new(vec![0], vec![2]).unwrap();
        assert_eq!(idx.update(&b).unwrap_err(), Error::DeactivationNotSupported(1));
        assert_eq!(idx.update(&activate(&[1])).unwrap_err(), Error::NotInitiallyOff(1));
    }

    #[test]
    fn or_work_within_literal_bound() {
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 5), (5, 2), (2, 6), (6, 3), (3, 7), (7, 4), (0, 7), (5, 6)],
        )
        .unwrap();
        let p = StatePartition::from_off(8, &[5, 6, 7]).unwrap();
        let idx = IncrementalIndex::build(&g, &p);
        let deg_comp: usize = (0..p.n_off()).map(|j| idx.comp_part(j).count_ones(..)).sum();
        assert_eq!(idx.stats().or_words, (deg_comp * idx.words_per_off_array()) as u64);
        assert_eq!(idx.stats().edge_probes, g.m() as u64);
        assert_eq!(idx.stats().direct_off_edges, 2);
    }
}
